"""Print a table of the worked identities with both sides to 30 digits.

Also reports the factor linking each displayed form to the general identity.
"""
import sys

from eulersums.series_engine import EvalContext, eval_expr, eval_terms
from eulersums.worked_examples import EXACT_EXAMPLES, NUMERIC_EXAMPLES, link_scale


def main() -> int:
    ctx = EvalContext(50)
    failures = 0
    print(f"{'label':<14s} {'scale':>8s}  {'lhs':<34s} residual")
    for ex in NUMERIC_EXAMPLES:
        lhs = eval_terms(ex.terms, ctx)
        res = lhs - eval_expr(ex.closed_form, ctx)
        scale = link_scale(ex)
        ok = scale is not None and abs(float(res.value)) < ctx.tolerance
        failures += not ok
        print(f"{ex.label:<14s} {str(scale):>8s}  {lhs.nstr(30):<34s} {float(abs(res.value)):.1e}")
    for ex in EXACT_EXAMPLES:
        bad = [v for v in ex.values if ex.residual(v) != 0]
        failures += bool(bad)
        print(f"{ex.label:<14s} {ex.param}={ex.values[0]}..{ex.values[-1]}: {'exact' if not bad else bad}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
