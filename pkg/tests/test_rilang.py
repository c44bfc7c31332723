import numpy as np
import pytest

from tripletrade import RateRegion, contains
from tripletrade.rilang import (ENTANGLEMENT_DISTRIBUTION, SUPER_DENSE_CODING, TELEPORTATION,
                                RIParseError, RIRateError, derivable, net_rate, parse,
                                parse_sum, print_expr)


def test_parse_teleportation():
    expr = parse("2[c->c] + [qq] >= [q->q]")
    assert np.allclose(net_rate(expr).triple, [-2, 1, -1])


def test_parse_entanglement_distribution():
    assert np.allclose(net_rate(parse("[q->q] >= [qq]")).triple, [0, -1, 1])


def test_parse_super_dense_coding():
    assert np.allclose(net_rate(parse(SUPER_DENSE_CODING)).triple, [2, -1, -1])


def test_parse_unknown_resource_offset():
    with pytest.raises(RIParseError) as exc:
        parse("3[xx] >= [qq]")
    assert exc.value.offset == 1


def test_parse_errors():
    with pytest.raises(RIParseError):
        parse("[qq]")                      # missing '>='
    with pytest.raises(RIParseError):
        parse("[qq] >= ")                  # empty rhs
    with pytest.raises(RIParseError):
        parse("[qq] >= [qq] junk!")
    with pytest.raises(RIParseError):
        parse("[qq >= [qq]")


def test_whitespace_insensitive():
    a = parse(" 2[c->c]+[qq]>=[q->q] ")
    b = parse("2 [c->c] + [qq] >= [q->q]")
    assert a == b


def test_trivial_net_rate():
    assert np.allclose(net_rate(parse("[qq] >= [qq]")).triple, [0, 0, 0])


def test_mother_expression_with_noisy_resource():
    net = net_rate(parse("<rho> + 0.25[q->q] >= 0.75[qq]"))
    assert np.allclose(net.triple, [0, -0.25, 0.75])
    assert net.noisy == "rho"


def test_common_randomness_excluded():
    expr = parse("[cc] + [q->q] >= [qq]")   # parses fine
    with pytest.raises(RIRateError):
        net_rate(expr)


def test_noisy_on_rhs_rejected():
    with pytest.raises(RIRateError):
        net_rate(parse("[q->q] >= <rho>"))


def test_noisy_with_coefficient_rejected():
    with pytest.raises(RIRateError):
        net_rate(parse("2<rho> >= [qq]"))


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------

CORPUS = [
    "2[c->c] + [qq] >= [q->q]",
    "[q->q] + [qq] >= 2[c->c]",
    "[q->q] >= [qq]",
    "<rho> + 0.25[q->q] >= 0.75[qq]",
    "<noise-model> + 1.5[c->c] >= 0.125[qq] + [cc]",
    "0.1[c->c] + 0.9[qq] >= 0.333[q->q]",
    "3[qq] + 2[qq] >= [qq] + [qq]",
    "<n_1> >= 7[c->c]",
]


def _more_corpus():
    rng = np.random.default_rng(97)
    units = ["[c->c]", "[q->q]", "[qq]", "[cc]"]
    out = []
    for i in range(42):
        def side():
            k = int(rng.integers(1, 4))
            terms = []
            for _ in range(k):
                c = rng.choice(["", "2", "0.5", "1.25", "10"])
                terms.append(f"{c}{units[int(rng.integers(0, 4))]}")
            return " + ".join(terms)
        out.append(f"{side()} >= {side()}")
    return out


@pytest.mark.parametrize("text", CORPUS + _more_corpus())
def test_print_parse_fixpoint(text):
    expr = parse(text)
    printed = print_expr(expr)
    again = parse(printed)
    assert again == expr
    assert print_expr(again) == printed


# ---------------------------------------------------------------------------
# derivability
# ---------------------------------------------------------------------------

def test_derivable_ed_from_itself():
    res = derivable(parse("[q->q] >= [qq]"), [ENTANGLEMENT_DISTRIBUTION])
    assert res.ok
    assert abs(res.coefficients[0] - 1.0) < 1e-9
    assert np.max(res.waste) < 1e-9


def test_qubit_not_derivable_from_tp_sd():
    res = derivable("[q->q]", [TELEPORTATION, SUPER_DENSE_CODING])
    assert not res.ok


def test_cbits_derivable_with_budget_protocols():
    res = derivable("2[c->c]",
                    [SUPER_DENSE_CODING, "<qubit-budget> >= [q->q]", "<ebit-budget> >= [qq]"])
    assert res.ok
    nets = [net_rate(parse(p)).triple
            for p in (SUPER_DENSE_CODING, "<qubit-budget> >= [q->q]", "<ebit-budget> >= [qq]")]
    assert np.max(np.abs(res.replay(nets) - [2, 0, 0])) < 1e-9


def test_certificates_replay():
    protocols = [TELEPORTATION, SUPER_DENSE_CODING, ENTANGLEMENT_DISTRIBUTION]
    nets = [net_rate(parse(p)).triple for p in protocols]
    rng = np.random.default_rng(89)
    hits = 0
    for _ in range(200):
        target = rng.uniform(-2, 2, 3)
        text = " >= ".join(["<r> + " + _sum_for(-np.minimum(target, 0)),
                            _sum_for(np.maximum(target, 0))])
        res = derivable(text, protocols)
        if res.ok:
            hits += 1
            assert np.max(np.abs(res.replay(nets) - target)) < 1e-9
    assert hits > 10


def _sum_for(v):
    names = ["[c->c]", "[q->q]", "[qq]"]
    terms = [f"{float(abs(x))!r}{n}" for x, n in zip(v, names)]
    return " + ".join(terms)


def test_derivable_agrees_with_geometric_membership():
    protocols = [TELEPORTATION, SUPER_DENSE_CODING, ENTANGLEMENT_DISTRIBUTION]
    nets = [net_rate(parse(p)).triple for p in protocols]
    waste = [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]
    region = RateRegion([[0, 0, 0]], np.vstack([nets, waste]))
    rng = np.random.default_rng(91)
    for _ in range(500):
        target = rng.uniform(-3, 3, 3)
        text = "<r> + " + _sum_for(-np.minimum(target, 0)) + " >= " \
               + _sum_for(np.maximum(target, 0))
        res = derivable(text, protocols)
        geo = contains(region, target, tol=1e-8)
        assert res.ok == geo
