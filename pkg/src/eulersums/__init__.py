"""Linear Euler sums with half-integer shifts: exact kernels, closed forms,
high-precision evaluation and an identity verifier."""
from .const_ring import Atom, AtomKind, ConstExpr, Family, SumIndex, normalize
from .exact_kernel import bernoulli, derivative_poly, genocchi
from .series_engine import EvalContext, MPFloat, eval_atom, eval_euler_sum
from .verifier import IdentityId, VerificationRecord, VerifyConfig, verify_grid, verify_one

__all__ = [
    "Atom",
    "AtomKind",
    "ConstExpr",
    "Family",
    "SumIndex",
    "normalize",
    "bernoulli",
    "genocchi",
    "derivative_poly",
    "EvalContext",
    "MPFloat",
    "eval_atom",
    "eval_euler_sum",
    "IdentityId",
    "VerificationRecord",
    "VerifyConfig",
    "verify_one",
    "verify_grid",
]
