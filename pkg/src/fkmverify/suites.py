"""Named verification suites.  Each suite returns a list of Checks."""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .adapted import (GOOD, MTX, PatternError, adapted_frame, b_blocks, d_blocks,
                      extract_348_multiplication, g_blocks, product_side_by_commutators,
                      quaternion_form, restrict_to_V, solve_identification,
                      third_column_residual, v_vanishing, validate_eqqq,
                      validate_frame_symmetries, validate_pattern)
from .clifford import build_skew_rep, clifford_residual, min_module_dim, skew_rep_residual
from .fkm import (fkm_polynomial, focal_frame_at, frame_from_normals, mplus_frame,
                  random_unit, sample_clifford_stiefel, sample_mplus, sample_mplus_exact,
                  shape_operator, verify_cartan_munzner)
from .forms import (block_decompose, cube_block_residual, expansion_consistency,
                    ot_identity_residuals, pq_identities, third_form_components)
from .linalg import eigenspace_counts, exact, joint_kernel, max_abs, rational_unit_vector
from .mirror import (direct_sharp, direct_star, mirror_triple, sharp_frame, tensor_difference,
                     transport_sharp, transport_star)
from .nullity import (detect_condition_A, condition_A_blocks, is_r_null_block,
                      is_r_null_definition, normalize_pair, pair_tensor, quadric_frame,
                      r_lambda, random_quadric_point, singular_locus_dim, synthetic_pair_tensor)
from .octonions import (OrthogonalMultiplication, mult_matrix, oct_mul,
                        verify_orthogonal_multiplication)
from .pencil import (BlockPencil, appendix_degenerate_dim, appendix_kernel_sampler,
                     common_column_relation, d_pencil_row_residual, generic_rank)
from .report import check
from .rng import task_rng, task_seed
from .worked import reproduce_worked_example

SQRT1_2 = 1 / np.sqrt(2.0)


@dataclass
class SuiteOptions:
    seed: int = 0
    scalar: str = "float64"
    tol: float = 1e-9
    side: str = "left"
    samples: int = None
    points: int = None
    trials: int = None

    def pick(self, attr, default):
        v = getattr(self, attr)
        return default if v is None else v


# ---------------------------------------------------------------- clifford

def suite_clifford(opt):
    poly = fkm_polynomial(opt.side)
    mats = poly.system.mats
    rep = build_skew_rep(opt.side)
    prod = reduce(lambda a, b: a @ b, mats)
    sign = int(prod[0, 0])
    prod_res = max_abs(prod - sign * np.eye(prod.shape[0], dtype=int))
    rng = task_rng(opt.seed, "clifford.composition")
    samples = opt.pick("samples", 64)
    octo = OrthogonalMultiplication(tuple(exact(mult_matrix(a, "left")) for a in range(8)))
    comp = 0
    for _ in range(samples):
        x, y = rational_unit_vector(8, rng), rational_unit_vector(8, rng)
        xy = oct_mul(x, y)
        comp = max(comp, abs(float(xy @ xy - (x @ x) * (y @ y))))
    om = verify_orthogonal_multiplication(octo, samples=samples, rng=rng)
    table = [min_module_dim(k) for k in range(10)]
    return [
        check(f"clifford.relations.{opt.side}", "symmetric Clifford relations P_a P_b + P_b P_a = 2 delta_ab I",
              clifford_residual(mats) == 0, clifford_residual(mats), count=len(mats), arithmetic="integer"),
        check(f"clifford.skew_rep.{opt.side}", "skew Clifford relations of rho_1..rho_7",
              skew_rep_residual(rep.mats) == 0, skew_rep_residual(rep.mats)),
        check(f"clifford.volume_element.{opt.side}", "product P_0 P_1 ... P_8",
              prod_res == 0, prod_res, equals=f"{sign:+d} I"),
        check("clifford.octonion_composition", "|x y| = |x| |y| for rational octonions",
              comp == 0, comp, samples=samples, arithmetic="rational"),
        check("clifford.hurwitz_888", "Hurwitz equations of octonion left multiplication",
              om["hurwitz_residual"] == 0 and om["pass"], om["hurwitz_residual"]),
        check("clifford.module_dimensions", "minimal C_k module dimensions, k = 0..9",
              table == [1, 2, 4, 4, 8, 8, 8, 8, 16, 32], 0.0, table=table),
    ]


# ---------------------------------------------------------------- Cartan-Munzner and cube

def suite_cartan_munzner(opt):
    poly = fkm_polynomial(opt.side)
    exact_mode = opt.scalar == "exact"
    samples = opt.pick("samples", 20 if exact_mode else 1000)
    cm = verify_cartan_munzner(poly, samples, seed=task_seed(opt.seed, "cm"), mode=opt.scalar)
    tol = 0.0 if exact_mode else opt.tol
    worst = max(cm.values())
    out = [check(f"cartan_munzner.{opt.side}", "Cartan-Munzner equations of f = -F_FKM",
                 worst <= tol, worst, samples=samples, **cm)]
    points = opt.pick("points", 50)
    out += cube_identity_checks(poly, points, points, task_rng(opt.seed, "cube"), max(opt.tol, 1e-10))
    return out


def cube_identity_checks(poly, points, normals, rng, tol=1e-10):
    cube = {"minus": 0.0, "plus": 0.0}
    counts_ok = {"minus": True, "plus": True}
    expected = {"minus": {0: 8, 1: 7, -1: 7}, "plus": {0: 7, 1: 8, -1: 8}}
    for _ in range(points):
        fm = focal_frame_at(poly, sample_clifford_stiefel(poly, rng=rng))
        x, n0 = sample_mplus(poly, rng=rng)
        tp = block_decompose(poly, mplus_frame(poly, x, n0))
        for _ in range(normals):
            s = shape_operator(poly, fm, random_unit(9, rng))
            cube["minus"] = max(cube["minus"], float(np.abs(s @ s @ s - s).max()))
            counts_ok["minus"] &= eigenspace_counts(np.linalg.eigvalsh(s)) == expected["minus"]
            s = tp.shape_combination(random_unit(8, rng))
            cube["plus"] = max(cube["plus"], float(np.abs(s @ s @ s - s).max()))
            counts_ok["plus"] &= eigenspace_counts(np.linalg.eigvalsh(s)) == expected["plus"]
    side = poly.system.side
    return [
        check(f"cube_identity.{side}", "(sum c_a S_a)^3 = sum c_a S_a on both focal manifolds",
              max(cube.values()) < tol, max(cube.values()), points=points, normals=normals, **cube),
        check(f"multiplicities.{side}", "shape operator spectrum multiplicities (0, +1, -1)",
              all(counts_ok.values()), 0.0, expected_minus=[8, 7, 7], expected_plus=[7, 8, 8],
              minus_ok=counts_ok["minus"], plus_ok=counts_ok["plus"]),
    ]


# ---------------------------------------------------------------- block identities, third form

def mplus_tensor(poly, rng, with_mirror=False):
    x, n0 = sample_mplus(poly, rng=rng)
    frame = mplus_frame(poly, x, n0)
    return frame, block_decompose(poly, frame, with_mirror=with_mirror)


def suite_ot_identities(opt):
    poly = fkm_polynomial(opt.side)
    exact_mode = opt.scalar == "exact"
    points = opt.pick("points", 20)
    draws = opt.pick("samples", 100)
    rng = task_rng(opt.seed, "ot")
    worst = [0.0] * 8
    cube = 0.0
    control_fail = 0
    tol = 0.0 if exact_mode else 1e-12
    for k in range(points):
        if exact_mode:
            x, normals = sample_mplus_exact(poly, rng=rng)
            t = block_decompose(poly, frame_from_normals(poly, x, normals, 1))
        else:
            _, t = mplus_tensor(poly, rng)
        res = ot_identity_residuals(t)
        worst = [max(a, b) for a, b in zip(worst, res)]
        cube = max(cube, cube_block_residual(t))
        if k < 3:
            bad = _perturbed(t, rng)
            control_fail += max(ot_identity_residuals(bad)) > 1e-6
    out = [check(f"ot_identities.{i + 1}.{opt.side}", f"block identity {i + 1} of the expansion",
                 r <= tol, r, points=points, scalar=opt.scalar) for i, r in enumerate(worst)]
    out.append(check(f"ot_identities.cube_block.{opt.side}", "E_+ x E_0 block of S_i^3 = S_i",
                     cube <= max(tol, 1e-12), cube))
    out.append(check(f"ot_identities.negative_control.{opt.side}", "perturbed blocks violate the identities",
                     control_fail == min(points, 3), 0.0, detected=control_fail))
    out += third_form_checks(poly, points, draws, task_rng(opt.seed, "third"), opt.tol)
    return out


def _perturbed(t, rng):
    from copy import deepcopy
    bad = deepcopy(t)
    shape = bad.B[2].shape
    if bad.B[2].dtype == object:
        bad.B[2] = bad.B[2] + exact(np.eye(*shape, dtype=int)) / 1000
    else:
        bad.B[2] = bad.B[2] + 1e-3 * rng.standard_normal(shape)
    return bad


def third_form_checks(poly, points, draws, rng, tol):
    pq = norm = expand = sym = 0.0
    for _ in range(points):
        frame, t = mplus_tensor(poly, rng)
        third = third_form_components(poly, frame)
        sym = max(sym, third.symmetry_residual())
        for _ in range(draws):
            y = random_unit(frame.tangent_basis().shape[1], rng)
            a, b = pq_identities(t, third, y)
            pq, norm = max(pq, abs(a)), max(norm, abs(b))
        ep, eq = expansion_consistency(poly, frame, t, third, samples=3, rng=rng)
        expand = max(expand, ep, eq)
    side = poly.system.side
    return [
        check(f"third_form.pq_orthogonal.{side}", "sum_a p_a q_a = 0", pq < tol, pq,
              points=points, draws=draws),
        check(f"third_form.norm_identity.{side}", "16 sum q_a^2 = 16 G |y|^2 - |grad G|^2",
              norm < tol, norm, points=points, draws=draws),
        check(f"third_form.expansion.{side}", "p and q agree with the interpolated expansion of f",
              expand < 1e-8, expand),
        check(f"third_form.symmetry.{side}", "q^a is totally symmetric", sym < 1e-12, sym),
    ]


# ---------------------------------------------------------------- nullity

def random_pair(k, rng):
    n0 = random_unit(k + 1, rng)
    n1 = random_unit(k + 1, rng)
    n1 -= (n1 @ n0) * n0
    return n0, n1 / np.linalg.norm(n1)


def suite_nullity(opt):
    poly = fkm_polynomial(opt.side)
    points = opt.pick("points", 50)
    per_point = 10
    rng = task_rng(opt.seed, "nullity")
    r_hist = {}
    equiv_fkm = total_fkm = 0
    cross = 0
    s_values, tau_dev = [], 0.0
    spread, canonical = 0.0, 0
    cond_a_false = 0
    est_ok = est_total = 0
    for _ in range(points):
        _, t = mplus_tensor(poly, rng)
        cond_a_false += not detect_condition_A(t)
        for j in range(per_point):
            pt, _ = pair_tensor(t, *random_pair(t.k, rng))
            r = r_lambda(pt)
            r_hist[r] = r_hist.get(r, 0) + 1
            spec, nt = normalize_pair(pt)
            cross += spec.r == r
            if spec.r == 4:
                s_values.append(float(spec.sigma.max()))
                spread = max(spread, float(np.ptp(spec.sigma)))
                canonical += (np.abs(spec.sigma - SQRT1_2).max() < 1e-8
                              and np.abs(spec.delta).max() < 1e-8)
                if spec.delta_params.size:
                    tau_dev = max(tau_dev, float(np.abs(spec.delta_params ** 2
                                                        + 2 * spec.sigma[::2] ** 2 - 1).max()))
            if j == 0:
                for l in range(2, nt.k + 1):
                    total_fkm += 1
                    equiv_fkm += is_r_null_block(nt, l, spec.r, 1e-8) == \
                        is_r_null_definition(nt, l, spec, samples=16, tol=1e-8, rng=rng)
                if r == 4:
                    est_total += 1
                    est_ok += singular_locus_dim(pt, 1j) == 11 and singular_locus_dim(pt, -1j) == 11
    pairs = points * per_point
    frac4 = r_hist.get(4, 0) / pairs
    trials = opt.pick("trials", 200)
    syn_agree = 0
    srng = task_rng(opt.seed, "nullity.synthetic")
    for i in range(trials):
        r = int(srng.integers(0, 6))
        spec, st = synthetic_pair_tensor(r, srng, null=i % 2 == 0)
        a = is_r_null_block(st, 2, r)
        b = is_r_null_definition(st, 2, spec, samples=16, rng=srng)
        syn_agree += a == b == (i % 2 == 0)
    cond_agree = 0
    for i in range(100):
        _, st = synthetic_pair_tensor(int(srng.integers(0, 5)), srng, extra=2)
        if i % 2 == 0:
            st.B = [np.zeros_like(b) for b in st.B]
            st.C = [np.zeros_like(c) for c in st.C]
        cond_agree += detect_condition_A(st) == condition_A_blocks(st)
    qgram = 0.0
    for _ in range(20):
        n0, n1 = quadric_frame(random_quadric_point(7, srng))
        g = np.array([[n0 @ n0, n0 @ n1], [n1 @ n0, n1 @ n1]])
        qgram = max(qgram, float(np.abs(g - np.eye(2)).max()))
    return [
        check(f"nullity.r_lambda_generic.{opt.side}", "generic r_lambda = 4, never above 4",
              frac4 >= 0.95 and max(r_hist) <= 4, 1 - frac4, pairs=pairs,
              histogram={str(k): v for k, v in sorted(r_hist.items())}),
        check(f"nullity.r_lambda_cross.{opt.side}", "r_lambda equals the rank of normalized B_1",
              cross == pairs, pairs - cross, pairs=pairs),
        check("nullity.test_equivalence.synthetic", "block test <=> definition test of r-nullity",
              syn_agree == trials, trials - syn_agree, trials=trials),
        check(f"nullity.test_equivalence.fkm.{opt.side}", "block test <=> definition test at FKM pairs",
              equiv_fkm == total_fkm, total_fkm - equiv_fkm, tested=total_fkm),
        check(f"nullity.spectral_relation.{opt.side}", "f_i^2 + 2 s_i^2 = 1 for paired blocks",
              tau_dev < 1e-8, tau_dev),
        check(f"nullity.spectral_data_generic.{opt.side}",
              "generic spectral data (sigma, Delta) = (I/sqrt2, 0)",
              canonical >= 0.95 * pairs, 1 - canonical / pairs, canonical_pairs=canonical,
              pairs=pairs, largest_sigma=max(s_values, default=0.0),
              smallest_sigma=min(s_values, default=0.0), sigma_spread=spread, target=SQRT1_2),
        check(f"nullity.condition_A.{opt.side}", "FKM points are not of Condition A",
              cond_a_false == points, points - cond_a_false),
        check("nullity.condition_A_equivalence", "kernel and block characterizations of Condition A agree",
              cond_agree == 100, 100 - cond_agree),
        check("nullity.quadric_frame", "quadric frames are orthonormal", qgram < 1e-12, qgram),
        check(f"nullity.singular_locus.{opt.side}", "dim S_lambda = m_+ + m_- - r_lambda = 11 at r = 4",
              est_ok == est_total and est_total > 0, est_total - est_ok, tested=est_total),
    ]


# ---------------------------------------------------------------- kernels

def joint_kernel_dims(t, tol=1e-9):
    b = [t.B[a] for a in range(1, t.k + 1)]
    c = [t.C[a] for a in range(1, t.k + 1)]
    return (joint_kernel(b, tol).shape[1], joint_kernel([m.T for m in b], tol).shape[1],
            joint_kernel(c, tol).shape[1], joint_kernel([m.T for m in c], tol).shape[1])


def suite_kernels(opt):
    poly = fkm_polynomial(opt.side)
    points = opt.pick("points", 20)
    rng = task_rng(opt.seed, "kernels")
    hits_b = hits_c = 0
    seen = {}
    for _ in range(points):
        _, t = mplus_tensor(poly, rng)
        dims = joint_kernel_dims(t)
        seen[str(dims)] = seen.get(str(dims), 0) + 1
        hits_b += dims[:2] == (1, 2)
        hits_c += dims[2:] == (1, 2)
    need = int(np.ceil(0.95 * points))
    return [
        check(f"kernels.B.{opt.side}", "dim cap ker B_a = 1 and dim cap ker B_a^T = 2",
              hits_b >= need, points - hits_b, points=points, hits=hits_b, observed=seen),
        check(f"kernels.C.{opt.side}", "dim cap ker C_a = 1 and dim cap ker C_a^T = 2",
              hits_c >= need, points - hits_c, points=points, hits=hits_c),
    ]


# ---------------------------------------------------------------- mirror

def sharp_involution_defect(mt):
    """Exact defect of # applied twice: blocks a >= 1 of the original
    tensor, and the full transported tensor after a second round trip."""
    back = transport_sharp(mt.sharp)
    worst = 0.0
    for x, y in ((back.A, mt.tensor.A), (back.B, mt.tensor.B), (back.C, mt.tensor.C)):
        worst = max(worst, max(float(np.abs(a - b).max()) for a, b in zip(x[1:], y[1:])))
    return max(worst, tensor_difference(transport_sharp(back), mt.sharp))


def suite_mirror(opt):
    poly = fkm_polynomial(opt.side)
    points = opt.pick("points", 20)
    rng = task_rng(opt.seed, "mirror")
    sharp = star = invol = frame_invol = 0.0
    for _ in range(points):
        x, n0 = sample_mplus(poly, rng=rng)
        frame = mplus_frame(poly, x, n0)
        mt = mirror_triple(poly, frame)
        sharp = max(sharp, tensor_difference(mt.sharp, direct_sharp(poly, frame)))
        star = max(star, tensor_difference(mt.star, direct_star(poly, frame)))
        invol = max(invol, sharp_involution_defect(mt))
        ff = sharp_frame(sharp_frame(frame))
        frame_invol = max(frame_invol, float(np.abs(ff.point - frame.point).max()),
                          float(np.abs(ff.normals - frame.normals).max()))
    return [
        check(f"mirror.sharp.{opt.side}", "transported data at x^# equal direct computation",
              sharp < 1e-10, sharp, points=points),
        check(f"mirror.star.{opt.side}", "transported data at x^* equal direct computation",
              star < 1e-10, star, points=points),
        check(f"mirror.involution.{opt.side}", "# is an involution on block data",
              invol == 0 and frame_invol == 0, max(invol, frame_invol)),
    ]


# ---------------------------------------------------------------- adapted frames and pencils

def suite_pencil(opt):
    poly = fkm_polynomial(opt.side)
    points = opt.pick("points", 5)
    rng = task_rng(opt.seed, "pencil")
    tol = max(opt.tol, 1e-10)
    w = {k: 0.0 for k in ("mtx", "good", "eqqq", "third_col", "d_rows", "g_rows", "eq", "hurwitz",
                          "composition", "p_v", "q_v", "identification", "orth", "quaternion")}
    ranks, relations, products, comms = set(), [], set(), set()
    errors = []
    for _ in range(points):
        x, n0 = sample_mplus(poly, rng=rng)
        try:
            af = adapted_frame(poly, x, n0, rng=rng)
        except PatternError as exc:
            errors.append(str(exc))
            continue
        t = af.tensor
        w["mtx"] = max(w["mtx"], validate_pattern(t, MTX, tol)[1])
        w["good"] = max(w["good"], validate_pattern(transport_star(t), GOOD, tol)[1])
        w["eqqq"] = max(w["eqqq"], validate_eqqq(af, tol)[1])
        w["third_col"] = max(w["third_col"], third_column_residual(t))
        w["d_rows"] = max(w["d_rows"], d_pencil_row_residual(d_blocks(t)))
        w["g_rows"] = max(w["g_rows"], d_pencil_row_residual(g_blocks(t)))
        sym = validate_frame_symmetries(t, tol)
        w["eq"] = max(w["eq"], max(v for k, v in sym.items() if k != "pass"))
        _, res, orth = solve_identification(t)
        w["identification"] = max(w["identification"], res)
        w["orth"] = max(w["orth"], orth)
        om = verify_orthogonal_multiplication(extract_348_multiplication(t), rng=rng)
        w["hurwitz"] = max(w["hurwitz"], om["hurwitz_residual"])
        w["composition"] = max(w["composition"], om["composition_residual"])
        bp = BlockPencil(b_blocks(t))
        ranks.add(generic_rank(bp, seed=task_seed(opt.seed, "pencil.rank")))
        v = common_column_relation(bp, tol)
        relations.append(None if v is None else float(abs(v[2])))
        vr = restrict_to_V(poly, af)
        pv, qv = v_vanishing(vr, rng=rng)
        w["p_v"], w["q_v"] = max(w["p_v"], pv), max(w["q_v"], qv)
        qf = quaternion_form(vr, rng=rng)
        products.add(qf["detected"])
        w["quaternion"] = max(w["quaternion"], min(qf["residual_yz"], qf["residual_zy"]))
        comms.add(product_side_by_commutators(vr)["detected"])
    ok_points = points - len(errors)
    side_word = {"yz": "left", "zy": "right"}
    out = [
        check(f"pencil.frames.{opt.side}", "adapted frames built at every sampled point",
              not errors, len(errors), errors=errors[:3]),
        check(f"pattern.mtx.{opt.side}", "mtx zero pattern of the adapted blocks", w["mtx"] <= tol, w["mtx"]),
        check(f"pattern.good.{opt.side}", "4-nullity block pattern", w["good"] <= tol, w["good"]),
        check(f"pattern.eqqq.{opt.side}", "canonical b_4..b_7 with a = 0, b = s",
              w["eqqq"] <= tol, w["eqqq"], sign=-1),
        check(f"pattern.third_columns.{opt.side}", "third columns of all B_a vanish",
              w["third_col"] < 1e-12, w["third_col"]),
        check(f"pencil.d_rows.{opt.side}", "rows of d(x) lie in the xyzw span",
              w["d_rows"] <= tol, w["d_rows"]),
        check(f"pencil.g_rows.{opt.side}", "rows of g(x) lie in the xyzw span",
              w["g_rows"] <= tol, w["g_rows"]),
        check(f"pencil.generic_rank.{opt.side}", "generic rank of b(x) is 2",
              ranks == {2}, 0.0, observed=sorted(ranks)),
        check(f"pencil.common_column.{opt.side}", "b_4..b_7 share the kernel vector (0, 0, 1)",
              len(relations) == ok_points and all(r is not None and abs(r - 1) < 1e-9 for r in relations),
              0.0 if not relations or None in relations else max(abs(r - 1) for r in relations)),
        check(f"frame_symmetries.{opt.side}", "B_a = Q C_a, A_a Q^T skew, A^#_p Q^T skew",
              w["eq"] < 1e-10, w["eq"]),
        check(f"frame_symmetries.identification.{opt.side}", "frame-free Q solves the symmetry equations and is orthogonal",
              w["identification"] < 1e-10 and w["orth"] < 1e-10, max(w["identification"], w["orth"])),
        check(f"multiplication_348.{opt.side}", "Hurwitz equations of the [3,4,8] multiplication",
              max(w["hurwitz"], w["composition"]) < 1e-10, max(w["hurwitz"], w["composition"])),
        check(f"mirror_V.q_vanishes.{opt.side}", "q^* vanishes on V", w["q_v"] < 1e-10, w["q_v"]),
        check(f"mirror_V.p_high_vanishes.{opt.side}", "p^*_j vanishes on V for j >= 5", w["p_v"] < 1e-10, w["p_v"]),
        check(f"mirror_V.quaternion_form.{opt.side}", "p^* on V equals -sqrt2 (x z + y o z)",
              w["quaternion"] < 1e-10 and len(products) == 1 and products == comms,
              w["quaternion"],
              product=sorted(side_word[p] for p in products),
              commutator_method=sorted(side_word[p] for p in comms)),
    ]
    return out


# ---------------------------------------------------------------- codimension-two samplers

def suite_appendix(opt):
    trials = opt.pick("trials", 500)
    out = []
    for lemma, kmax in ((1, 3), (2, 2), (3, 2)):
        worst, least = 0, 99
        for k in range(1, kmax + 1):
            mx, mn = appendix_kernel_sampler(lemma, task_seed(opt.seed, f"appendix.{lemma}.{k}") % 2**32,
                                             trials, k=k)
            worst, least = max(worst, mx), min(least, mn)
        degenerate = appendix_degenerate_dim(lemma, task_seed(opt.seed, f"appendix.{lemma}") % 2**32)
        out.append(check(f"appendix.pencil{lemma}.generic_bound", "kernel dimension at most 6 for generic c",
                         worst <= 6, max(0, worst - 6), max_dim=worst, min_dim=least, trials=trials))
        out.append(check(f"appendix.pencil{lemma}.degenerate", "c = (1, 0, ..., 0) leaves z free (dim 7)",
                         degenerate == 7, abs(degenerate - 7), dim=degenerate))
    poly = fkm_polynomial(opt.side)
    rng = task_rng(opt.seed, "appendix.est")
    dims = {}
    for _ in range(opt.pick("points", 10)):
        _, t = mplus_tensor(poly, rng)
        pt, _ = pair_tensor(t, *random_pair(t.k, rng))
        if r_lambda(pt) != 4:
            continue
        for iota in (1j, -1j):
            d = singular_locus_dim(pt, iota)
            dims[d] = dims.get(d, 0) + 1
    out.append(check(f"appendix.singular_locus.{opt.side}", "complex kernel of S_1 - iota S_0 has dim 11 at r = 4",
                     set(dims) == {11}, 0.0 if set(dims) == {11} else 1.0,
                     observed={str(k): v for k, v in dims.items()}))
    return out


# ---------------------------------------------------------------- worked example

def suite_worked(opt):
    poly = fkm_polynomial("left")
    r = reproduce_worked_example(poly, tol=1e-10)
    mats = {f"B_{i + 1}": r.blocks[i] for i in range(7)}
    out = [
        check("worked.literal_point_rejected", "eta = (e3, e4)/2 is not on M_-",
              not r.literal_on_mminus, r.literal_residual, residual_meaning="membership defect"),
        check("worked.corrected_point", "x* = ((e0, e1), (e3, e2))/2 lies on M_-",
              r.corrected_residual == 0 and r.frame_defect < 1e-12,
              max(r.corrected_residual, r.frame_defect)),
        check("worked.B3_zero", "B_3 vanishes identically", r.zero_block == 2 and r.zero_block_norm == 0,
              r.zero_block_norm, zero_block=r.zero_block + 1),
        check("worked.templates", "B_1..B_7 match the displayed blocks up to signed permutation",
              r.matched and r.fit_residual < 1e-10, r.fit_residual, scale=r.scale, family="left"),
    ]
    out[-1].matrices = mats
    return out


SUITES = {
    "clifford": suite_clifford,
    "cartan-munzner": suite_cartan_munzner,
    "ot-identities": suite_ot_identities,
    "nullity": suite_nullity,
    "kernels": suite_kernels,
    "mirror": suite_mirror,
    "pencil": suite_pencil,
    "appendix": suite_appendix,
    "reproduce-sec22": suite_worked,
}


def run_suite(name, opt):
    if name == "full":
        return [c for key in SUITES for c in SUITES[key](opt)]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](opt)
