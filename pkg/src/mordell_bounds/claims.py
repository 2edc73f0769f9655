"""The claim catalog: typed entries, the expressions they evaluate, and topic coverage.

Each catalog entry names an expression from :data:`EXPRESSIONS` together with
parameter bindings.  An expression is called as ``fn(**params)`` inside a
``working_precision`` block and returns one of

* an :class:`Interval` (kinds ``decimal_approx``, ``strict_ineq``, ``nonneg_gap``),
* a pair ``(lhs, rhs)`` compared with the entry's relation (``table_row``),
* an exact value or a tri-state flag (``identity``): ``True`` certified,
  ``False`` refuted, ``None`` not decided at this precision.
"""

from __future__ import annotations

import enum
import importlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import descent_bounds as D
from . import hyperbolic as H
from . import mordell_counts as M
from . import sphere_packing as S
from .errors import DomainError, UnknownClaim
from .numerics import Interval
from .numerics import interval as I
from .numerics.special import robbins_sides, wendel_gap


class ClaimKind(str, enum.Enum):
    DECIMAL_APPROX = "decimal_approx"
    STRICT_INEQ = "strict_ineq"
    NONNEG_GAP = "nonneg_gap"
    TABLE_ROW = "table_row"
    IDENTITY = "identity"


RELATIONS = ("<", "<=", ">", ">=")


def parse_number(text) -> Fraction:
    """Exact rational from an int, a "p/q" string or a decimal string."""
    if isinstance(text, bool):
        raise DomainError("booleans are not numbers")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise DomainError(f"cannot read {text!r} as an exact number")


@dataclass(frozen=True)
class Claim:
    id: str
    kind: ClaimKind
    expr: str
    params: dict = field(default_factory=dict)
    target: str | None = None
    digits: int | None = None
    relation: str | None = None
    tags: tuple = ()
    topics: tuple = ()
    anchor: str = ""
    max_bits: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ClaimKind(self.kind))
        object.__setattr__(self, "tags", tuple(self.tags))
        object.__setattr__(self, "topics", tuple(self.topics))
        if self.expr not in EXPRESSIONS:
            raise DomainError(f"claim {self.id}: unknown expression {self.expr!r}")
        kind = self.kind
        if kind is ClaimKind.DECIMAL_APPROX:
            if self.digits is None or self.digits < 0 or self.target is None:
                raise DomainError(f"claim {self.id}: decimal claims need a target and a digit count")
        if kind in (ClaimKind.STRICT_INEQ, ClaimKind.TABLE_ROW):
            if self.relation not in RELATIONS:
                raise DomainError(f"claim {self.id}: relation must be one of {RELATIONS}")
        if kind is ClaimKind.STRICT_INEQ and (self.target is None or self.relation not in ("<", ">")):
            raise DomainError(f"claim {self.id}: strict inequalities need a target and < or >")
        if kind is ClaimKind.IDENTITY and self.target is None:
            raise DomainError(f"claim {self.id}: identities need a target")

    @property
    def target_value(self):
        if self.target is None:
            return None
        if self.kind is ClaimKind.IDENTITY and self.target in ("true", "false"):
            return self.target == "true"
        return parse_number(self.target)

    def evaluate(self):
        return EXPRESSIONS[self.expr](**self.params)


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------


def _q(x):
    return parse_number(x)


def _iv(x):
    return Interval(parse_number(x))


def _certain(flag: bool):
    """Map a "certainly" test onto the tri-state: False only means not certified."""
    return True if flag else None


def _asinh(x):
    return I.asinh(Interval(x))


def _disc_integral(j):
    return H.disc_integral(int(j))


def _thick_value(g):
    return H.thick_part_value(int(g))


def _thick_row(g):
    g = int(g)
    if g <= 5:
        value = H.thick_part_value(g)
    else:
        value = H.thick_part_I4(g, H.I4_GENUS_INDEX[g])
    return Interval(H.analytic_constant("I5", g).fractions()[0]), value


def _thick_large(which):
    first, second = H.large_genus_thick_bounds()
    return first if int(which) == 1 else second


def _table_row(g, label):
    for row in H.table_comparison_rows(int(g)):
        if row.label == label:
            return row.exact_sides or (row.lhs, row.rhs)
    raise DomainError(f"no comparison row {label!r} at genus {g}")


def _xi_relation(g, which):
    g = int(g)
    if which == "xi3_generic":
        return H.xi_generic_holds(g)[0]
    if which == "xi4_generic":
        return H.xi_generic_holds(g)[1]
    if which == "xi1_xi3":
        return H.xi_sufficiency_holds(g)[0]
    if which == "xi2_xi4":
        return _certain(H.xi_sufficiency_holds(g)[1])
    if which == "xi_ratio":
        return H.xi_ratio_holds(g)
    if which == "xi2_product":
        return H.xi2_is_product(g)
    raise DomainError(f"unknown xi relation {which!r}")


def _heat_diag():
    return H.heat_diag_constant()[0]


def _heat_dominance(a, t):
    u, majorant = H.heat_u_bound(_q(a), _q(t), rel_tol=Fraction(1, 1024))
    return majorant - u


def _collar_nu_gap():
    return (I.pi() / (_asinh(1) * 2) - 1) * 4


def _proof_decimal(name):
    return H.proof_decimals()[name][0]


def _width_tail():
    x = H.proof_decimals()["collar_width_margin"][0]
    # 2x e^{-x} + e^{-2x} decreases for x >= 1, so the lower endpoint is the worst case
    x = Interval(x.lo)
    return x * I.exp(-x) * 2 + I.exp(-x * 2)


def _separating_power():
    return I.ipow(1 - I.exp(-I.pi() * 3), 4)


def _two_log_two():
    return I.log(Interval(4))


def _peak_decay_ratio():
    pi = I.pi()
    s5 = I.sqrt(Interval(5))
    num = -2 * I.log(1 - I.exp(-(s5 - 2) * 5))
    corr = 1 + I.exp(-pi * pi / _asinh(Fraction(1, 2)) + (s5 + 1) * pi * 2)
    return num * corr * corr / (pi * (1 - I.exp(-pi * 3)))


def _loop_length(which):
    if which == "upper":
        return _asinh(8) * 2
    return _asinh(Fraction(1, 2)) * Fraction(21, 2)


def _loop_lengths():
    return _loop_length("lower"), _loop_length("upper")


def _collar_integral():
    r = I.sqrt(Interval(5)) - 2
    r2 = r * r
    return I.pi() * 8 * r2 * (1 - I.log(r)) / I.ipow(1 - r2, 2)


def _double_tanh_half():
    return I.tanh(Interval(Fraction(1, 2))) * 2


def _nu_exponential():
    return I.exp(I.pi() * I.pi() / (_asinh(1) * 8))


def _tanh_fraction(denominator):
    return I.tanh(_asinh(Fraction(1, 2)) / int(denominator))


def _collar_sum_min(k, pieces=1024):
    """Certified lower bound for min over t in [0, 1] of u(3k - 4, t)."""
    arg = 3 * int(k) - 4
    best = None
    for i in range(int(pieces)):
        a, b = Fraction(i, pieces), Fraction(i + 1, pieces)
        # numerator increases and denominator increases in t
        low = (1 + Interval(a) ** 3 * arg) / I.ipow(1 + Interval(b) * arg, 2)
        best = low if best is None else I.imin(best, low)
    return Interval(best.lo)


def _collar_sum_row(k):
    k = int(k)
    return H.analytic_constant("I6", k), _collar_sum_min(k)


def _collar_sum_cubic():
    t = Fraction(67, 100)
    return 2 * t**3 + 3 * t**2 - 2


def _collar_sum_tail():
    third = Interval(Fraction(4, 3))
    return I.ipow(Interval(3), third) * Fraction(7, 20), I.ipow(Interval(11), third) / 16


def _ode_suite(eps, k):
    report = H.ode_comparison_suite(1, _q(eps), int(k), 3)
    return _certain(report.all_hold)


def _lambda1(ell):
    return H.lambda1_lower(H.SurfaceParams(2, ell_sigma=_q(ell))).value


# part I constants


def _rational(value):
    return Interval(_q(value))


def _vojta_ratio_max():
    x = Fraction(115, 100)
    return Interval(((1 + Fraction(1, 10**7)) / x + x) / 2)


def _lattice_density():
    return 1 / (I.sqrt(Interval(5)) * 50)


def _vojta_angle_constant():
    return (2 + _lattice_density() + Fraction(882, 10**6)) / 2


def _vojta_final():
    return Interval(Fraction(100492, 100000) * (1 + Fraction(1, 10**5))), I.sqrt(Interval(Fraction(101, 100)))


def _vojta_small_coefficient():
    return Interval(Fraction(631 * 10**12) * Fraction(2012, 1000) / Fraction(144 * 10**16))


def _sturm_condition():
    c_beta = I.sqrt(Interval(Fraction(107, 10)))
    c_theta = I.sqrt(Interval(Fraction(101, 100)))
    lhs = (Fraction(107, 10) - I.ipow((c_beta * 2 + c_theta) / 3, 2)) * 4
    rhs = I.pi() * I.pi() * 9 / I.ipow(c_beta - c_theta, 2)
    return rhs, lhs


def _kl_ratio(n):
    n = int(n)
    return Interval(Fraction((n - 1) * (n - 5)) / ((Fraction(104, 100) * n + 3) * (Fraction(104, 100) * n + 1)))


def _sin_beta(g):
    return S.refined_angles(int(g))[2]


def _refined_binomial(n, g):
    r = S.refined_A_bound(int(n), int(g))
    if not all(r.checks.values()):
        return None
    return r.binomial_form


def _refined_degree(n, g):
    return S.refined_degree(int(n), int(g))


def _kl_base_checks(g):
    return _certain(all(S.kl_base_bound(int(g)).checks.values()))


def _exp_quotient(g):
    g = int(g)
    x = I.log(Interval(g)) / g
    return I.exp(x * Fraction(285, 100)), 1 + x * 3


def _shell_ratio(g):
    g = int(g)
    shells = I.log(Interval(10**5) * I.ipow(Interval(g), Interval(Fraction(5, 2)))) / I.log(Interval(Fraction(115, 100)))
    return (shells + 1) / I.log(Interval(g))


def _final_constant(g):
    g = int(g)
    return (1 + I.log(Interval(g)) * 3 / g) * Fraction(213, 100)


def _kl_prefactor():
    return I.euler_e() * 24 / Fraction(107, 10)


def _crossover_range(lo, hi):
    return all(M.crossover_holds(g) == (g >= M.KL_GENUS) for g in range(int(lo), int(hi) + 1))


def _log_base_power_range(lo, hi):
    return _certain(all(M.log_base_power_check(g) for g in range(int(lo), int(hi) + 1)))


# sphere packing


def _gegenbauer_root(n, m):
    return S.gegenbauer_largest_root(S.GegenbauerIndex(int(n), int(m)))


def _trivial_roots(n):
    n = int(n)
    flags = []
    for m in range(1, 9):
        idx = S.GegenbauerIndex(n, m)
        flags.append(S.gegenbauer_largest_root(idx).certainly_le(S.trivial_root_bound(idx)))
    return _certain(all(flags))


def _kissing(n, theta):
    q = S.PackingQuery(int(n), _theta(theta))
    return S.packing_bound(q).value


def _theta(text):
    if text == "pi/3":
        return I.pi() / 3
    return _iv(text)


def _calc_gap(n, t, a):
    return S.calc_bound(_q(n), _q(t), _q(a))


def _wendel(x, s):
    return wendel_gap(_q(x), _q(s))


def _robbins(k):
    lower, upper = robbins_sides(int(k))
    value = math.factorial(int(k))
    return _certain(lower.certainly_lt(value) and upper.certainly_gt(value))


# point counts


def _assembly(g_hi, rank_hi):
    ok = all(
        all(M.assembly_check(g, r)["checks"].values())
        for g in range(2, int(g_hi) + 1)
        for r in range(int(rank_hi) + 1)
    )
    return _certain(ok)


def _chain(which, g):
    g = int(g)
    checks = M.medium_chain_checks(g, 2 * g) if which == "medium" else M.large_chain_checks(g)
    return _certain(all(checks.values()))


def _cone(g, kappa):
    g = int(g)
    theta = I.acos(I.sqrt(Interval(Fraction(113, 100 * g))))
    verdict = M.bogomolov_cone_hypothesis(g, _q(kappa), theta)
    return {M.Verdict.CERTIFIED: True, M.Verdict.FAILED: False}.get(verdict)


def _vojta_shells(g):
    return M.vojta_shell_count(int(g))


def _medium_shells(g, setting):
    return M.shell_count(int(g), M.Setting(setting))


def _quadratic_lemma(n_hi, g_hi):
    return all(M.quadratic_lemma_holds(n, g) for n in range(2, int(n_hi) + 1) for g in range(2, int(g_hi) + 1))


def _phi_coefficient(g):
    return M.phi_coefficient(int(g))


# descent


def _descent(g, s_size, dims, base, odd=False):
    return D.descent_general(int(g), int(s_size), [int(x) for x in dims], int(base), odd_degree_orbit=bool(odd))


def _exact_point(value: Interval):
    if not value.is_point():
        return None
    return value.fractions()[0]


def _cl2(d, disc):
    return _exact_point(D.cl2_bound(int(d), int(disc)))


def _hyperelliptic_params(g, deg, disc_f=1, disc_k=1, d=1):
    return D.CurveParams(int(g), int(d), abs_disc_K=int(disc_k), abs_norm_disc_f=int(disc_f), deg_f=int(deg))


def _rank_floor(g, deg):
    return S.integer_bound(D.rank_bound_hyperelliptic(_hyperelliptic_params(g, deg)))


def _remond(g, n0=1):
    return _exact_point(D.remond_rank(D.CurveParams(int(g), N0=int(n0))))


def _bad_reduction_c3(g):
    return D.bad_reduction_bound(D.CurveParams(int(g))).c3


def _bad_reduction_c3_cap(g):
    g = int(g)
    return _bad_reduction_c3(g), Interval(Fraction(22, 10) * 2 ** (8 * g * g)) * I.log(Interval(g))


def _composition(g, deg, disc_f=1, disc_k=1, d=1):
    checks = D.composition_check(_hyperelliptic_params(g, deg, disc_f, disc_k, d))
    return _certain(all(checks.values()))


def _average(g):
    return _exact_point(D.average_bounds(int(g)))


# generic constants, used by hand-written claim files


def _pi():
    return I.pi()


def _euler_e():
    return I.euler_e()


def _sqrt(x):
    return I.sqrt(_iv(x))


EXPRESSIONS = {
    "pi": _pi,
    "euler_e": _euler_e,
    "sqrt": _sqrt,
    "rational": _rational,
    "disc_integral": _disc_integral,
    "thick_value": _thick_value,
    "thick_row": _thick_row,
    "thick_large": _thick_large,
    "table_row": _table_row,
    "xi_relation": _xi_relation,
    "heat_diag": _heat_diag,
    "heat_dominance": _heat_dominance,
    "collar_nu_gap": _collar_nu_gap,
    "proof_decimal": _proof_decimal,
    "width_tail": _width_tail,
    "separating_power": _separating_power,
    "two_log_two": _two_log_two,
    "peak_decay_ratio": _peak_decay_ratio,
    "loop_length": _loop_length,
    "loop_lengths": _loop_lengths,
    "collar_integral": _collar_integral,
    "double_tanh_half": _double_tanh_half,
    "nu_exponential": _nu_exponential,
    "tanh_fraction": _tanh_fraction,
    "collar_sum_row": _collar_sum_row,
    "collar_sum_cubic": _collar_sum_cubic,
    "collar_sum_tail": _collar_sum_tail,
    "ode_suite": _ode_suite,
    "lambda1": _lambda1,
    "vojta_ratio_max": _vojta_ratio_max,
    "lattice_density": _lattice_density,
    "vojta_angle_constant": _vojta_angle_constant,
    "vojta_final": _vojta_final,
    "vojta_small_coefficient": _vojta_small_coefficient,
    "sturm_condition": _sturm_condition,
    "kl_ratio": _kl_ratio,
    "sin_beta": _sin_beta,
    "refined_binomial": _refined_binomial,
    "refined_degree": _refined_degree,
    "kl_base_checks": _kl_base_checks,
    "exp_quotient": _exp_quotient,
    "shell_ratio": _shell_ratio,
    "final_constant": _final_constant,
    "kl_prefactor": _kl_prefactor,
    "crossover_range": _crossover_range,
    "log_base_power_range": _log_base_power_range,
    "gegenbauer_root": _gegenbauer_root,
    "trivial_roots": _trivial_roots,
    "packing_bound": _kissing,
    "calc_gap": _calc_gap,
    "wendel_gap": _wendel,
    "robbins": _robbins,
    "assembly": _assembly,
    "chain": _chain,
    "cone_hypothesis": _cone,
    "vojta_shells": _vojta_shells,
    "medium_shells": _medium_shells,
    "quadratic_lemma": _quadratic_lemma,
    "phi_coefficient": _phi_coefficient,
    "descent": _descent,
    "cl2": _cl2,
    "rank_floor": _rank_floor,
    "remond": _remond,
    "bad_reduction_c3": _bad_reduction_c3,
    "bad_reduction_c3_cap": _bad_reduction_c3_cap,
    "composition": _composition,
    "average": _average,
}


# ---------------------------------------------------------------------------
# catalog loading
# ---------------------------------------------------------------------------


def _expand(entry: dict):
    """Expand an entry with a ``grid`` (one integer parameter over a list or range)."""
    grid = entry.get("grid")
    if grid is None:
        yield entry
        return
    (name, span), = grid.items()
    values = list(range(span["from"], span["to"] + 1)) if isinstance(span, dict) else list(span)
    width = max(len(str(v)) for v in values)
    for value in values:
        item = {k: v for k, v in entry.items() if k != "grid"}
        item["params"] = {**entry.get("params", {}), name: value}
        item["id"] = f"{entry['id']}.{name}{value:0{width}d}"
        yield item


def claims_from_document(doc) -> list:
    """Build claims from a parsed JSON document: a list of entries or {"claims": [...]}."""
    entries = doc["claims"] if isinstance(doc, dict) else doc
    out = []
    for entry in entries:
        for item in _expand(entry):
            out.append(Claim(**item))
    seen = set()
    for c in out:
        if c.id in seen:
            raise DomainError(f"duplicate claim id {c.id!r}")
        seen.add(c.id)
    return out


def catalog_text() -> str:
    return resources.files(__package__).joinpath("catalog.json").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def _catalog():
    claims = claims_from_document(json.loads(catalog_text()))
    return tuple(sorted(claims, key=lambda c: c.id))


def load_catalog() -> list:
    return list(_catalog())


def get_claim(claim_id: str) -> Claim:
    for c in _catalog():
        if c.id == claim_id:
            return c
    raise UnknownClaim(f"no claim with id {claim_id!r}")


# ---------------------------------------------------------------------------
# topic coverage
# ---------------------------------------------------------------------------

# Every in-scope result is listed here under a functional name.  A topic is
# covered when some catalog entry lists it or one of its operations exists.
COVERAGE = {
    "mordell_count": ("mordell_counts.mordell_bound", "mordell_counts.assembly_check"),
    "manin_mumford_count": ("mordell_counts.manin_mumford_bound",),
    "function_field_count": ("mordell_counts.function_field_assembly",),
    "bad_reduction_count": ("descent_bounds.bad_reduction_bound",),
    "hyperelliptic_count": ("descent_bounds.hyperelliptic_count_bound", "descent_bounds.composition_check"),
    "average_count": ("descent_bounds.average_bounds",),
    "remond_rank": ("descent_bounds.remond_rank",),
    "height_invariant_chain": ("mordell_counts.phi_omega_chain",),
    "vojta_threshold": ("mordell_counts.vojta_gap_check",),
    "mumford_threshold": ("mordell_counts.mumford_gap_check",),
    "bogomolov_ball": ("mordell_counts.bogomolov_small",),
    "bogomolov_cone": ("mordell_counts.bogomolov_cone",),
    "quadratic_identity": ("mordell_counts.quadratic_lemma_holds", "mordell_counts.parallelogram_gap_exact"),
    "reverse_cauchy_schwarz": ("mordell_counts.reverse_cauchy_schwarz_gap",),
    "geometric_bogomolov": ("mordell_counts.geometric_bogomolov_bounds",),
    "phi_inequality": ("mordell_counts.phi_coefficient", "mordell_counts.conductor_coefficient"),
    "cap_volume": ("numerics.special.cap_volume", "sphere_packing.cap_volume_bound"),
    "wendel_inequality": ("numerics.special.wendel_gap", "mordell_counts.wendel_step"),
    "calculus_lemma": ("sphere_packing.calc_bound",),
    "rankin_bound": ("sphere_packing.rankin_bound",),
    "sturm_comparison": ("sphere_packing.sturm_sign_changes",),
    "gegenbauer_trivial_root": ("sphere_packing.trivial_root_bound",),
    "sturm_condition": (),
    "kl_bound": ("sphere_packing.kl_bound",),
    "refined_kl_bound": ("sphere_packing.refined_A_bound",),
    "robbins_binomial": ("numerics.special.robbins_sides",),
    "kl_base": ("sphere_packing.kl_base_bound",),
    "medium_count": ("mordell_counts.medium_bound",),
    "large_count_intermediate": ("mordell_counts.large_rankin_internal",),
    "large_count_refined": ("mordell_counts.large_bound",),
    "descent_rank": ("descent_bounds.descent_general", "descent_bounds.rank_bound_hyperelliptic"),
    "class_group_torsion": ("descent_bounds.cl2_bound",),
    "collar_widths": ("hyperbolic.collar_from_length", "hyperbolic.collar_inj_radius"),
    "kahler_collar": ("hyperbolic.collar_nu",),
    "collar_properties": ("hyperbolic.collar_gap", "hyperbolic.collar_annulus_distance"),
    "local_basis_norms": ("hyperbolic.local_basis_norm",),
    "collar_form_bounds": (
        "hyperbolic.BOUND_REGISTRY[collar_pointwise]",
        "hyperbolic.BOUND_REGISTRY[collar_segment]",
        "hyperbolic.BOUND_REGISTRY[collar_realpart]",
    ),
    "heat_kernel_formula": ("hyperbolic.heat_kernel_H",),
    "heat_kernel_halfplane": ("hyperbolic.heat_u_bound",),
    "heat_kernel_diagonal": ("hyperbolic.diag_heat_bound", "hyperbolic.heat_diag_constant"),
    "first_eigenvalue": ("hyperbolic.lambda1_lower",),
    "ode_comparison": ("hyperbolic.ode_comparison_suite",),
    "eigenfunction_supnorm": ("hyperbolic.eigfn_supnorm_bound",),
    "disc_integrals": ("hyperbolic.disc_integral", "hyperbolic.disc_integral_closed_form"),
    "thick_part": ("hyperbolic.thick_part_value", "hyperbolic.thick_part_I4"),
    "thick_part_phi": ("hyperbolic.analytic_constant",),
    "cut_surface_phi": ("hyperbolic.BOUND_REGISTRY[sep_phi]",),
    "nonseparating_w12": ("hyperbolic.BOUND_REGISTRY[nonsep_W12]",),
    "peak_section": ("hyperbolic.BOUND_REGISTRY[peak_period]",),
    "collar_sum_estimate": (),
    "short_nonseparating_phi": (),
    "global_phi_lower": ("hyperbolic.phi_lower",),
    "phi_upper": ("hyperbolic.phi_upper",),
    "faltings_elkies": ("hyperbolic.fe_lower", "hyperbolic.xi_sufficiency"),
    "green_function_bounds": (
        "hyperbolic.BOUND_REGISTRY[green_log_gap]",
        "hyperbolic.BOUND_REGISTRY[small_eig_sum]",
        "hyperbolic.BOUND_REGISTRY[lambda1_phi]",
        "hyperbolic.BOUND_REGISTRY[bergman_sup]",
    ),
    "metric_comparison": (
        "hyperbolic.metric_compare_coefficient",
        "hyperbolic.BOUND_REGISTRY[supnorm_potential]",
    ),
    "constant_tables": ("hyperbolic.table_comparison_rows",),
}


def resolve_operation(dotted: str):
    """Import ``module.attr`` (or ``module.attr[key]``) relative to this package."""
    key = None
    if dotted.endswith("]"):
        dotted, _, key = dotted[:-1].partition("[")
    module_name, _, attr = dotted.rpartition(".")
    module = importlib.import_module(f"{__package__}.{module_name}")
    obj = getattr(module, attr)
    return obj if key is None else obj[key]


def coverage_report(claims=None) -> dict:
    """topic -> {"claims": [...ids], "operations": [...resolvable names], "covered": bool}."""
    claims = load_catalog() if claims is None else claims
    report = {}
    for topic, ops in COVERAGE.items():
        ids = [c.id for c in claims if topic in c.topics]
        found = []
        for op in ops:
            try:
                resolve_operation(op)
            except (ImportError, AttributeError, KeyError):
                continue
            found.append(op)
        report[topic] = {"claims": ids, "operations": found, "covered": bool(ids or found)}
    return report


def unknown_topics(claims=None) -> set:
    claims = load_catalog() if claims is None else claims
    return {t for c in claims for t in c.topics if t not in COVERAGE}
