"""Quick end-to-end check of the extension module."""

import math
from fractions import Fraction

import fracbvp


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    assert fracbvp.falling_factorial("-1/2", "-1/2") == fracbvp.falling_factorial(Fraction(-1, 2), Fraction(-1, 2))
    assert close(fracbvp.falling_factorial("-1/2", "-1/2"), math.sqrt(math.pi), 1e-14)
    assert fracbvp.falling_factorial("-1/2", "1/2") == 0.0
    log_abs, sign = fracbvp.signed_log_gamma(-0.5)
    assert sign == -1.0 and close(log_abs, math.log(2 * math.sqrt(math.pi)), 1e-14)

    base, vals = fracbvp.fractional_sum([1.0] * 6, 0, "3/2")
    assert base == "3/2" and len(vals) == 6
    base, back = fracbvp.fractional_difference(vals, base, "3/2")
    assert base == "2" and all(close(x, 1.0, 1e-10) for x in back)

    shape = fracbvp.Shape("3/2", 10)
    assert close(shape.sigma(), 45.575150504141469963, 1e-12)
    assert close(shape.tau(), 4.4482870108161033136, 1e-12)
    assert shape.verify_kernel_bounds()["pass"]
    assert all(ok for _, ok, _ in shape.verify())
    assert len(shape.green_table()) == 13

    try:
        fracbvp.Shape(2, 5)
    except fracbvp.DegenerateProblemError:
        pass
    else:
        raise AssertionError("v = 2 accepted")

    cls, l = fracbvp.estimate_limit_ratio("builtin example2", 0)
    assert cls == "finite" and close(l, 2.0, 1e-4)
    assert fracbvp.estimate_limit_ratio("builtin example1", 0)[0] == "infinite"

    iv = fracbvp.lambda_intervals(shape.sigma(), shape.tau(), 2.0, 1.0)
    assert not iv["superlinear_nonempty"] and not iv["sublinear_nonempty"]

    problem = fracbvp.Problem.example(2)
    assert fracbvp.Problem.from_config(problem.to_config()).to_config() == problem.to_config()
    assert problem.interval()["regime"] == "limits_at_zero_and_infinity"
    sol = problem.with_lambda(0.9 / shape.sigma()).solve()
    assert sol.iterations <= 1000 and sol.residual <= 1e-8 and sol.cone_margin >= -1e-10
    assert sol.t[0] == "-1/2"

    linear = fracbvp.Problem.from_config("v = 13/10\nb = 5\nlambda = 0.5\nh = constant 1\nf = constant 2\n")
    g, d = linear.solve("green"), linear.solve("direct")
    assert all(close(a, b, 1e-9) for a, b in zip(g.y, d.y))
    print("smoke test passed")


if __name__ == "__main__":
    main()
