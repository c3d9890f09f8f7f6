import pytest

from statesum3d.catdata import (
    CocycleTable,
    FiniteGroup,
    GroupHom,
    build_vec_g_theta,
    builtin_category,
    builtin_category_names,
    fibonacci_category,
    graduator,
    groups_isomorphic,
    ising_like_category,
    load_category,
    neutral_dimension,
    push_forward,
    save_category,
    validate_category,
)
from statesum3d.exactnum import make_field, root_of_unity


def test_group_builtins():
    z4 = FiniteGroup.cyclic(4)
    assert z4.order == 4 and z4.identity == 0 and z4.inv(1) == 3
    d3 = FiniteGroup.dihedral(3)
    s3 = FiniteGroup.symmetric(3)
    assert d3.order == 6 and s3.order == 6
    assert groups_isomorphic(d3, s3)
    assert not groups_isomorphic(FiniteGroup.cyclic(6), s3)


def test_group_rejects_bad_tables():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])


def test_cocycle_reps():
    for n in (2, 3, 4):
        for q in range(n):
            CocycleTable.cyclic_rep(n, q)  # constructor validates
    # corrupting one value must be rejected with the quadruple named
    z2 = FiniteGroup.cyclic(2)
    f4 = make_field("cyclotomic", 4)
    vals = {(a, b, c): f4.one() for a in range(2) for b in range(2) for c in range(2)}
    vals[(1, 1, 1)] = root_of_unity(f4, 1)
    with pytest.raises(ValueError, match="quadruple"):
        CocycleTable(z2, f4, vals)


def test_vec_g_theta_accepts_nontrivial_z2():
    z2 = FiniteGroup.cyclic(2)
    f2 = make_field("cyclotomic", 2)
    vals = {(a, b, c): f2.one() for a in range(2) for b in range(2) for c in range(2)}
    vals[(1, 1, 1)] = -f2.one()
    theta = CocycleTable(z2, f2, vals)
    cat = build_vec_g_theta(z2, theta)
    rep = validate_category(cat)
    assert rep.passed(), rep.failures()
    assert neutral_dimension(cat).is_one()


@pytest.mark.parametrize("name", builtin_category_names())
def test_builtin_categories_validate(name):
    cat = builtin_category(name)
    rep = validate_category(cat)
    assert rep.passed(), (name, rep.failures())


def test_neutral_dimension_values():
    fib = fibonacci_category()
    nd = neutral_dimension(fib)
    phi = fib.field.gen()
    assert nd == fib.field.rational(2) + phi  # 1 + phi^2
    isg = ising_like_category()
    assert neutral_dimension(isg) == isg.field.rational(4)
    assert neutral_dimension(builtin_category("vect_Z3_theta1")).is_one()


def test_corrupted_fibonacci_detected():
    fib = fibonacci_category()
    fsym = dict(fib.fsym)
    key = (1, 1, 1, 1, 0, 0)
    fsym[key] = -fsym[key]
    from statesum3d.catdata import GFusionData
    bad = GFusionData(fib.field, fib.group, fib.names, fib.grade, fib.dual,
                      fib.fusion_set, fsym, fib.dim_l, fib.dim_r, fib.pivotal,
                      name="fibonacci_corrupt")
    rep = validate_category(bad)
    assert not rep.passed()
    failing = [c for c, _ in rep.failures()]
    assert any(c in ("pentagon", "snake consistency", "duality scalars") for c in failing)
    pentagon_details = [d for c, d in rep.failures() if c == "pentagon"]
    if pentagon_details:
        assert "(" in pentagon_details[0]  # names a 9-tuple


def test_graduator():
    catz3 = builtin_category("vect_Z3_theta0")
    grp, proj = graduator(catz3)
    assert groups_isomorphic(grp, FiniteGroup.cyclic(3))
    assert sorted(set(proj)) == [0, 1, 2]

    fib = fibonacci_category()
    grp, proj = graduator(fib)
    assert grp.order == 1 and proj == [0, 0]

    isg = ising_like_category()
    grp, proj = graduator(isg)
    assert grp.order == 2
    assert proj[0] == proj[1] != proj[2]


def test_push_forward():
    z4 = FiniteGroup.cyclic(4)
    z2 = FiniteGroup.cyclic(2)
    cat = builtin_category("vect_Z4_theta0")
    phi = GroupHom(z4, z2, [0, 1, 0, 1])
    pushed = push_forward(cat, phi)
    rep = validate_category(pushed)
    assert rep.passed(), rep.failures()
    assert len(pushed.sector(0)) == 2
    nd = neutral_dimension(pushed)
    assert nd == pushed.field.rational(2)  # gamma * dim(C_1) with gamma = 2
    for i in range(cat.n):
        assert pushed.dim_l[i] == cat.dim_l[i]

    ident = GroupHom.identity(z4)
    same = push_forward(cat, ident)
    assert same.grade == cat.grade

    to_triv = GroupHom(z4, FiniteGroup.trivial(), [0, 0, 0, 0])
    plain = push_forward(cat, to_triv)
    assert all(g == 0 for g in plain.grade)

    with pytest.raises(ValueError, match="surjective"):
        push_forward(cat, GroupHom(z4, z2, [0, 0, 0, 0]))
    with pytest.raises(ValueError, match="homomorphism"):
        GroupHom(z4, z2, [0, 1, 1, 0])


@pytest.mark.parametrize("name", ["vect_Z4_theta3", "fibonacci", "ising_like"])
def test_file_roundtrip(name):
    cat = builtin_category(name)
    text = save_category(cat)
    back = load_category(text)
    assert back.names == cat.names
    assert back.fusion_set == cat.fusion_set
    assert back.fsym == cat.fsym
    assert back.dim_l == cat.dim_l
    assert back.pivotal == cat.pivotal
    assert validate_category(back).passed()


def test_sector_dimension_identity_all_builtins():
    for name in builtin_category_names():
        cat = builtin_category(name)
        nd = neutral_dimension(cat)
        for g in cat.group.elements():
            sec = cat.sector(g)
            if not sec:
                continue
            total = cat.field.zero()
            for i in sec:
                total = total + cat.dim_l[i] * cat.dim_r[i]
            assert total == nd, (name, g)
