import pytest

from statesum3d.catdata import FiniteGroup, builtin_category
from statesum3d.complexes import dual_skeleton
from statesum3d.gauge import enumerate_labelings, gauge_orbits
from statesum3d.hqft import (
    assemble_block_matrix,
    build_product_cylinder,
    build_sheet_cylinder,
    builtin_surface,
    cobordism_from_closed,
    cobordism_map,
    cylinder_projector,
    hqft_space_rank,
    parse_cobordism,
    parse_surface,
    refinement_parent,
    relative_invariant,
    save_cobordism,
    save_surface,
    subdivide_edge,
)
from statesum3d.linalg import matrix_mul
from statesum3d.statesum import closed_invariant

from trifiles import load_tri

TRIV = FiniteGroup.trivial()
Z2 = FiniteGroup.cyclic(2)
Z3 = FiniteGroup.cyclic(3)


def test_surface_validation():
    with pytest.raises(ValueError, match="Euler"):
        builtin_surface("torus_2loop", Z2).__class__(
            Z2, [(0, 0), (0, 0)], [[(0, 0), (1, 0), (0, 1), (1, 1)]],
            {0: 0, 1: 0}, [(0, 0)])
    s3 = FiniteGroup.symmetric(3)
    noncommuting = None
    for a in s3.elements():
        for b in s3.elements():
            if s3.mul(a, b) != s3.mul(b, a):
                noncommuting = (a, b)
                break
        if noncommuting:
            break
    with pytest.raises(ValueError, match="product condition"):
        builtin_surface("torus_2loop", s3,
                        labels={0: noncommuting[0], 1: noncommuting[1]})
    # commuting-pair torus labels pass
    surf = builtin_surface("torus_2loop", Z2, labels={0: 1, 1: 1})
    assert len(surf.faces) == 1


def test_subdivide_edge_structure():
    surf = builtin_surface("torus_2loop", Z2)
    fine = subdivide_edge(surf, 0)
    assert fine.nvertices == 2 and len(fine.edges) == 3
    assert len(fine.faces) == len(surf.faces)
    assert fine.labels[2] == surf.labels[0]


IDEMPOTENCE_CASES = [
    ("sphere_circle", "vect_Z2_theta0", Z2),
    ("sphere_circle", "vect_Z2_theta1", Z2),
    ("sphere_fine", "vect_Z2_theta1", Z2),
    ("sphere_circle", "vect_Z3_theta1", Z3),
    ("torus_2loop", "vect_Z2_theta0", Z2),
    ("torus_2loop", "vect_Z2_theta1", Z2),
    ("torus_fine", "vect_Z2_theta1", Z2),
    ("torus_2loop", "vect_1_trivial", TRIV),
    ("sphere_circle", "vect_1_trivial", TRIV),
]


@pytest.mark.parametrize("sname,cname,grp", IDEMPOTENCE_CASES)
def test_projectors_idempotent(sname, cname, grp):
    cat = builtin_category(cname)
    sp = cylinder_projector(builtin_surface(sname, grp), cat)
    # cylinder_projector itself verifies p*p == p exactly
    assert sp.rank >= 0


def test_ranks():
    assert hqft_space_rank("empty", builtin_category("fibonacci")) == 1
    for cname, grp in [("vect_Z2_theta0", Z2), ("vect_Z2_theta1", Z2),
                       ("vect_Z3_theta2", Z3)]:
        cat = builtin_category(cname)
        assert hqft_space_rank("sphere_circle", cat) == 1
        assert hqft_space_rank("torus_2loop", cat) == 1
    assert hqft_space_rank("torus_2loop", builtin_category("vect_1_trivial")) == 1
    # derived golden values: rank of the double for the modular backends
    assert hqft_space_rank("torus_2loop", builtin_category("fibonacci")) == 4
    assert hqft_space_rank("torus_2loop", builtin_category("ising_like")) == 9


def test_rank_agreement_across_skeletons():
    for cname, grp in [("vect_Z2_theta1", Z2), ("fibonacci", TRIV)]:
        cat = builtin_category(cname)
        for coarse, fine in [("sphere_circle", "sphere_fine"),
                             ("torus_2loop", "torus_fine")]:
            r0 = hqft_space_rank(coarse, cat)
            r1 = hqft_space_rank(fine, cat)
            assert r0 == r1, (cname, coarse)


def test_transitivity_and_gluing():
    for cname, grp in [("vect_Z2_theta1", Z2), ("fibonacci", TRIV)]:
        cat = builtin_category(cname)
        for coarse, fine in [("sphere_circle", "sphere_fine"),
                             ("torus_2loop", "torus_fine")]:
            A0 = builtin_surface(coarse, grp)
            A1 = builtin_surface(fine, grp)
            parent = refinement_parent(fine)
            up = build_sheet_cylinder(A0, A1, parent, ambient_is_top=True)
            dn = build_sheet_cylinder(A1, A0, parent, ambient_is_top=False)
            m_up, *_ = assemble_block_matrix(up, cat)
            m_dn, *_ = assemble_block_matrix(dn, cat)
            p0 = cylinder_projector(A0, cat).matrix
            p1 = cylinder_projector(A1, cat).matrix
            assert matrix_mul(m_dn, m_up, cat.field) == p0
            assert matrix_mul(m_up, m_dn, cat.field) == p1
            # the gluing law on the same skeleton is idempotence, checked in
            # cylinder_projector; also check p1 . up == up . p0 (functoriality)
            assert matrix_mul(p1, m_up, cat.field) == matrix_mul(m_up, p0, cat.field)


def test_relative_invariant_closed_case():
    sk = dual_skeleton(load_tri("l31"))
    cat = builtin_category("vect_Z3_theta1")
    labs = enumerate_labelings(sk, cat.group)
    orbits = gauge_orbits(sk, cat.group, labs)
    for rep, _ in orbits:
        cob = cobordism_from_closed(sk, rep, cat.group)
        rel = relative_invariant(cob, cat, {}, {})
        assert rel[()] == closed_invariant(sk, rep, cat).value
        mat = cobordism_map(cob, cat, {}, {})
        assert mat == [[closed_invariant(sk, rep, cat).value]]


def test_sphere_cylinder_blocks():
    cat = builtin_category("vect_Z3_theta1")
    surf = builtin_surface("sphere_circle", Z3, labels={0: 1})
    cob = build_product_cylinder(surf)
    # boundary colorings are the grade-1 simples; equal colors give a
    # nonzero 1x1 block
    c = surf.colorings(cat)[0]
    rel = relative_invariant(cob, cat, c, c)
    assert rel and not list(rel.values())[0].is_zero()
    # a mismatched-grade pinned coloring is rejected as a zero block
    other = (cat.sector(2)[0],)
    assert relative_invariant(cob, cat, c, other) is None


def test_torus_cylinder_grading_diagonal():
    cat = builtin_category("vect_Z2_theta0")
    surf = builtin_surface("torus_2loop", Z2, labels={0: 1, 1: 0})
    cob = build_product_cylinder(surf)
    cols = surf.colorings(cat)
    assert len(cols) == 1  # pointed: one simple per grade
    matrix, *_ = assemble_block_matrix(cob, cat)
    assert matrix == cylinder_projector(surf, cat).matrix


def test_file_roundtrips():
    surf = builtin_surface("torus_fine", Z2)
    text = save_surface(surf)
    back = parse_surface(text, Z2)
    assert back.edges == surf.edges and back.labels == surf.labels
    cob = build_product_cylinder(builtin_surface("sphere_circle", Z2))
    text = save_cobordism(cob)
    back = parse_cobordism(text, Z2)
    assert back.regions == cob.regions
    assert back.edges == cob.edges
    cat = builtin_category("vect_Z2_theta1")
    m1, *_ = assemble_block_matrix(cob, cat)
    m2, *_ = assemble_block_matrix(back, cat)
    assert m1 == m2
