"""Totally-real decision rules, the five standard involutions of the rank-4
hyperbolic sum, and transcendental-side involution classes."""

import random
from fractions import Fraction as F

import pytest

from k3lines.errors import InputError
from k3lines.fqf import (
    TRIVIAL_FORM,
    finite_quadratic_form,
    fqf_isometries,
    involution_classes,
)
from k3lines.lattices import (
    Isometry,
    Lattice,
    build_lattice,
    discriminant_data,
    discriminant_form,
    invariant_sublattice,
    invariants_match,
    sign_structure_action,
    _vectors_of_norm,
)
from k3lines.realcrit import (
    ADMISSIBLE,
    INADMISSIBLE,
    UNKNOWN,
    Definite2,
    GenericDiscr,
    TSideClasses,
    TwoU,
    TWO_U_LABELS,
    Verdict,
    match_real_structure,
    t_side_involution_classes,
    totally_real_criterion,
    two_u_involutions,
)


def cyclic(d, q):
    q = F(q) % 2
    return finite_quadratic_form((d,), (q,), [[q % 1]])


# -- the decision rules -------------------------------------------------------


def test_verdict_kind_is_checked():
    with pytest.raises(ValueError):
        Verdict("MAYBE", ())


def test_trivial_discriminant_large_rank_contains_norm_two():
    v = totally_real_criterion(TRIVIAL_FORM, 12, 1)
    assert v.kind == "YES_CONTAINS_2"
    assert any("norm-2" in r for r in v.reasons)


def test_schur_quartic_discriminant_is_no():
    # Line side of the classical 64-line quartic: the complementary rank-2
    # genus is represented only by [8,4,8], which has minimum 4 and, being
    # positive definite, no hyperbolic sublattice.
    d_n = discriminant_form(build_lattice("[8,4,8]")).negated()
    v = totally_real_criterion(d_n, 2, -48)
    assert v.kind == "NO"
    assert v.reasons


def test_binary_form_oracle_confirms_the_no():
    # Enumerate all reduced even positive definite binary forms of
    # determinant 48 and check directly: the ones whose discriminant form is
    # anti-isometric to the line-side form have no vector of square 2 (and a
    # positive definite lattice has no isotropic vector, hence no U(2)).
    d_n = discriminant_form(build_lattice("[8,4,8]")).negated()
    reduced = []
    for a in range(2, 15, 2):
        for b in range(0, a // 2 + 1):
            c, rem = divmod(48 + b * b, a)
            if rem == 0 and c % 2 == 0 and c >= a:
                reduced.append((a, b, c))
    assert (8, 4, 8) in reduced and (2, 0, 24) in reduced
    genus = []
    for a, b, c in reduced:
        lat = Lattice(((a, b), (b, c)))
        if fqf_isometries(d_n, discriminant_form(lat), anti=True):
            genus.append((a, b, c))
    assert genus == [(8, 4, 8)]
    # Coordinate bound x_i^2 <= (G^-1)_ii * norm; here (G^-1)_ii = 1/6.
    assert _vectors_of_norm([[8, 4], [4, 8]], [F(1, 6), F(1, 6)], 2) == []


def test_hyperbolic_plus_three_torsion_contains_norm_two():
    # Rank 4 with 2-length 2 passes the norm-2 case outright, so the weaker
    # hyperbolic containment is never consulted.
    d_n = discriminant_form(build_lattice("U(2)")).direct_sum(cyclic(3, F(2, 3)))
    v = totally_real_criterion(d_n, 4, 12)
    assert v.kind == "YES_CONTAINS_2"


def test_doubled_hyperbolic_pair_is_u2_case():
    # T = 2U(2): every square in the 2-part is an integer, so no norm-2
    # summand exists, but the hyperbolic pair is right there.
    d_n = discriminant_form(build_lattice("2U(2)")).negated()
    v = totally_real_criterion(d_n, 4, 16)
    assert v.kind == "YES_CONTAINS_U2"
    assert any("hyperbolic case, p=2" in r and "pass" in r for r in v.reasons)


def test_two_length_r_minus_one_is_unknown():
    v = totally_real_criterion(cyclic(2, F(1, 2)), 2, 2)
    assert v.kind == "UNKNOWN"
    assert any("undecided" in r for r in v.reasons)


def test_unknown_is_not_masked_by_the_hyperbolic_case():
    # 2-length 3 = r-1: even though the hyperbolic pair is present, the
    # undecided norm-2 case must surface as UNKNOWN, not as a weaker YES.
    d_n = discriminant_form(build_lattice("U(2)")).direct_sum(cyclic(2, F(1, 2)))
    v = totally_real_criterion(d_n, 4, 8)
    assert v.kind == "UNKNOWN"


def test_rank_one_complement_fails_both_cases():
    v = totally_real_criterion(TRIVIAL_FORM, 1, 1)
    assert v.kind == "NO"


def test_input_validation():
    with pytest.raises(InputError):
        totally_real_criterion(TRIVIAL_FORM, 0, 1)
    with pytest.raises(ValueError):
        totally_real_criterion(cyclic(3, F(2, 3)), 2, 5)


def test_odd_prime_determinant_branch():
    # T = [2] + [6]: the 3-length equals r-1, so the forced 3-adic
    # determinant has to match -2|det N|, and it does.
    d_n = discriminant_form(build_lattice("[2]+[6]")).negated()
    v = totally_real_criterion(d_n, 2, 12)
    assert v.kind == "YES_CONTAINS_2"
    assert any("p=3" in r and "r-1" in r and "pass" in r for r in v.reasons)


def test_characteristic_vector_determinant_branch():
    # T = [2] + [4]: the only order-2 vector of square -1/2 is
    # characteristic, so the complement determinant test has to fire.
    d_n = discriminant_form(build_lattice("[2]+[4]")).negated()
    v = totally_real_criterion(d_n, 2, 8)
    assert v.kind == "YES_CONTAINS_2"
    assert any("characteristic" in r for r in v.reasons)


def _random_positive_times_negative(rng, extra):
    """Even lattice of signature (1, extra): one positive square or a
    hyperbolic plane, padded with negative even squares."""
    if rng.random() < 0.5:
        head = build_lattice(f"[{2 * rng.randint(1, 3)}]")
        tail_count = extra
    else:
        head = build_lattice("U")
        tail_count = extra - 1
    if tail_count < 0:
        return None
    lat = head
    for _ in range(tail_count):
        lat = lat.direct_sum(build_lattice(f"[{-2 * rng.randint(1, 3)}]"))
    return lat


def test_norm_two_soundness_suite():
    # T = [2] + T' with T' of signature (1, s) really does contain a norm-2
    # summand, so the rules must never answer NO on its invariants.
    rng = random.Random(20260818)
    done = 0
    while done < 60:
        t_prime = _random_positive_times_negative(rng, rng.randint(0, 3))
        if t_prime is None:
            continue
        t = build_lattice("[2]").direct_sum(t_prime)
        v = totally_real_criterion(
            discriminant_form(t).negated(), t.rank, t.determinant
        )
        assert v.kind != "NO", (t.gram, v.reasons)
        done += 1


def test_hyperbolic_soundness_suite():
    # Likewise T = U(2) + T' always contains U(2).
    rng = random.Random(20260819)
    done = 0
    while done < 60:
        t_prime = _random_positive_times_negative(rng, rng.randint(0, 3))
        if t_prime is None:
            continue
        t = build_lattice("U(2)").direct_sum(t_prime)
        v = totally_real_criterion(
            discriminant_form(t).negated(), t.rank, t.determinant
        )
        assert v.kind != "NO", (t.gram, v.reasons)
        done += 1


# -- the five involutions -----------------------------------------------------


def test_two_u_involutions_labels_and_basic_shape():
    pairs = two_u_involutions()
    assert tuple(label for label, _ in pairs) == TWO_U_LABELS
    for label, g in pairs:
        assert g.is_involution()
        assert sign_structure_action(g.lattice, g) == -1


def test_two_u_fixed_sublattices_match_their_labels():
    two_u = build_lattice("2U")
    for label, g in two_u_involutions():
        fixed, _ = invariant_sublattice(two_u, g)
        assert invariants_match(fixed, build_lattice(label)), label
        assert fixed.signature[0] == 1


def test_two_u_fixed_sublattices_are_pairwise_distinct():
    fixed = [
        invariant_sublattice(build_lattice("2U"), g)[0]
        for _, g in two_u_involutions()
    ]
    for i in range(len(fixed)):
        for j in range(i + 1, len(fixed)):
            assert not invariants_match(fixed[i], fixed[j])


# -- transcendental-side classes ----------------------------------------------


def test_t_side_generic_is_unknown():
    spec = GenericDiscr(cyclic(3, F(2, 3)), 4)
    assert t_side_involution_classes(spec) is None


def test_generic_discr_validates_lengths():
    with pytest.raises(InputError):
        GenericDiscr(discriminant_form(build_lattice("U(2)")), 1)
    with pytest.raises(InputError):
        GenericDiscr(cyclic(3, F(2, 3)), 0)


def test_definite2_requires_positive_definite_rank_two():
    with pytest.raises(InputError):
        Definite2(build_lattice("U"))
    with pytest.raises(InputError):
        Definite2(build_lattice("A2"))
    with pytest.raises(InputError):
        Definite2(build_lattice("[2]+[2]+[2]"))


def test_two_u_requires_positive_scale():
    with pytest.raises(InputError):
        TwoU(0)


def test_t_side_for_unscaled_two_u_is_trivial():
    tside = t_side_involution_classes(TwoU(1))
    assert tside.form.is_trivial()
    assert tside.members == frozenset({()})
    assert tside.conjugation_closed
    assert tside.class_count == 1


def test_t_side_for_scaled_two_u_hits_three_classes():
    tside = t_side_involution_classes(TwoU(3))
    assert tside.conjugation_closed
    assert tside.class_count == 3
    classes = involution_classes(tside.form)
    hit = [c for c in classes if c.members & tside.members]
    assert len(hit) == 3
    assert sum(c.size for c in hit) == len(tside.members)
    # Recomputation is deterministic.
    again = t_side_involution_classes(TwoU(3))
    assert again == tside


def test_t_side_for_definite_rank_two():
    tside = t_side_involution_classes(Definite2(build_lattice("[8,4,8]")))
    assert not tside.conjugation_closed
    assert tside.members
    square = t_side_involution_classes(Definite2(build_lattice("[2,0,2]")))
    assert square.members


# -- gluing -------------------------------------------------------------------


def test_match_unknown_without_transcendental_data():
    d_n = discriminant_form(build_lattice("U(2)"))
    tau = discriminant_data(build_lattice("U(2)")).act(
        Isometry(build_lattice("U(2)"), ((-1, 0), (0, -1)))
    )
    status, _ = match_real_structure(tau, None)
    assert status == UNKNOWN


def test_match_reports_genus_mismatch():
    lat = build_lattice("[2]")
    tau = discriminant_data(lat).act(Isometry(lat, ((-1,),)))
    status, reason = match_real_structure(tau, t_side_involution_classes(TwoU(3)))
    assert status == INADMISSIBLE
    assert "genus mismatch" in reason


def test_match_admits_a_glued_involution():
    # Push the summand swap to the discriminant of 2U(3) and match it against
    # the transcendental classes of the same lattice: the swap is one of the
    # five constructions, so it must glue.
    lat = build_lattice("2U(3)")
    data = discriminant_data(lat)
    swap = Isometry(
        lat,
        (
            (0, 0, 1, 0),
            (0, 0, 0, 1),
            (1, 0, 0, 0),
            (0, 1, 0, 0),
        ),
    )
    tau = data.act(swap)
    status, _ = match_real_structure(tau, t_side_involution_classes(TwoU(3)))
    assert status == ADMISSIBLE
