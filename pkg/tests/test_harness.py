import json

import pytest

from pnu import harness as h
from pnu.harness import CLAIMS, parse_corpus, report_json, run_corpus, run_entry, summarize


def run(spec, suites, selectors=None, **kw):
    text = f"[{spec}]\nsuites = {' '.join(suites)}\n"
    if selectors:
        text += f"selectors = {' '.join(selectors)}\n"
    for k, v in kw.items():
        text += f"{k} = {v}\n"
    (entry,) = parse_corpus(text)
    return run_entry(entry)


def by_claim(verdicts, claim, subject=None):
    out = [v for v in verdicts if v.claim == claim and (subject is None or v.subject == subject)]
    assert out, (claim, subject)
    return out[0]


def test_theorem_a_dihedral32():
    vs = run("dihedral:32", ["theorem-A"])
    v = by_claim(vs, "nu-power-commutator")
    assert v.status == h.PASS and [2, 1] in [list(x) for x in v.checked["pairs"]]
    assert by_claim(vs, "nu-power-commutator-2-exponent").status == h.PASS
    assert by_claim(vs, "nu-power-commutator-odd-exponent").status == h.UNMET


def test_theorem_a_extraspecial_unmet():
    vs = run("extraspecial:3,p2", ["theorem-A"])
    # exponent p^2 group: gamma_2 = G^p, so the condition holds at (1, 1)
    assert by_claim(vs, "nu-power-commutator").status == h.PASS


def test_theorem_a_vacuous_for_elementary_abelian():
    v = by_claim(run("elemab:2,2", ["theorem-A"]), "nu-power-commutator")
    assert v.status == h.PASS


def test_potent_suite():
    vs = run("dihedral:16", ["potent"], ["gamma:2", "trivial"])
    assert by_claim(vs, "nu-exponent-potent", "gamma:2").status == h.PASS
    assert by_claim(vs, "nu-exponent-potent", "trivial").status == h.PASS
    strict = by_claim(vs, "nu-exponent-potent-strict", "gamma:2")
    assert strict.status == h.UNMET  # p in {2, 3} is flagged, never guessed


def test_potent_extraspecial_center():
    vs = run("extraspecial:3,p2", ["potent"], ["center"])
    assert by_claim(vs, "nu-exponent-potent", "center").status == h.PASS


def test_maximal_class_suite():
    for spec in ("dihedral:16", "quaternion:16"):
        vs = run(spec, ["maximal-class"])
        assert by_claim(vs, "maximal-class-nu-exponent").status == h.PASS
        assert by_claim(vs, "maximal-class-2-tensor").status == h.PASS
    vs = run("elemab:2,2", ["maximal-class"])
    assert by_claim(vs, "maximal-class-nu-exponent").status == h.PASS  # order p^2 has coclass 1
    vs = run("elemab:2,3", ["maximal-class"])
    assert by_claim(vs, "maximal-class-nu-exponent").status == h.UNMET


def test_log_bound():
    for spec in ("extraspecial:3,p2", "cyclic:4", "dihedral:16"):
        v = by_claim(run(spec, ["log-bound"]), "tensor-log-bound")
        assert v.status == h.PASS
        assert v.checked["exp_tensor"] and v.checked["bound"] % v.checked["exp_tensor"] == 0


def test_coclass_suite():
    vs = run("dihedral:16", ["coclass"])
    assert by_claim(vs, "coclass-tensor-2").status == h.PASS
    assert by_claim(vs, "coclass-tensor-odd").status == h.UNMET
    assert by_claim(vs, "coclass-power-commutator-2").status == h.UNMET
    vs = run("extraspecial:3,p2", ["coclass"])
    assert by_claim(vs, "coclass-tensor-odd").status == h.PASS
    assert by_claim(vs, "coclass-schur-odd").status == h.PASS


def test_structure_remarks():
    vs = run("cyclic:2", ["structure"])
    v = by_claim(vs, "nu-coclass")
    assert v.status == h.PASS
    assert by_claim(vs, "nu-oracle").status == h.PASS
    vs = run("extraspecial:3,p2", ["structure"])
    chain = by_claim(vs, "nu-exponent-chain")
    # |G^ab| = 9 is odd, so the refined bound joins the six base relations
    assert chain.status == h.PASS and chain.checked["relations"] == 7
    assert by_claim(run("elemab:2,2", ["structure"]), "nu-exponent-chain").checked["relations"] == 6


def test_hall_and_lemmas_pass():
    vs = run("dihedral:8", ["hall", "lemmas"])
    assert all(v.status in (h.PASS, h.UNMET) for v in vs)
    assert by_claim(vs, "hall-collection").checked["samples"] == 2 * h.HALL_SAMPLES


def test_resource_exceeded_is_isolated():
    text = "[cyclic:4]\nsuites = log-bound\n[elemab:2,3]\nsuites = log-bound\nmax_cosets = 100\n"
    vs = run_corpus(parse_corpus(text))
    st = {v.group: v.status for v in vs}
    assert st == {"cyclic:4": h.PASS, "elemab:2,3": h.EXCEEDED}


def test_empty_corpus():
    vs = run_corpus(parse_corpus(""))
    assert vs == [] and json.loads(report_json(vs)) == []
    assert summarize(vs)["fail"] == 0


def test_report_is_canonical_and_reproducible():
    text = "[dihedral:8]\nsuites = structure hall\n[cyclic:3]\nsuites = structure\n"
    a = report_json(run_corpus(parse_corpus(text), seed=11))
    b = report_json(run_corpus(parse_corpus(text), seed=11))
    c = report_json(run_corpus(parse_corpus(text), seed=11, jobs=2))
    assert a == b == c
    data = json.loads(a)
    keys = [(d["group"], d["claim"], d["subject"]) for d in data]
    assert keys == sorted(keys)
    assert all(d["wall_time"] is None for d in data)
    assert all(d["statement"] == CLAIMS[d["claim"]] for d in data)


def test_timings_are_opt_in():
    vs = run_corpus(parse_corpus("[cyclic:2]\nsuites = log-bound\n"))
    assert json.loads(report_json(vs, timings=True))[0]["wall_time"] is not None


def test_big_integers_become_strings():
    assert h._jsonable({"x": 2 ** 60, "y": 5}) == {"x": str(2 ** 60), "y": 5}


def test_fail_carries_witness():
    def bad():
        h.require(False, left=3, right=4)
    (entry,) = parse_corpus("[cyclic:2]\nsuites = log-bound\n")
    v = h._run(h.Context(entry, 1000, 0), "tensor-log-bound", bad)
    assert v.status == h.FAIL and v.witness == {"left": 3, "right": 4}


@pytest.mark.parametrize("text", ["[dihedral:8]\nsuites = nonsense\n", "[dihedral:8]\nselectors = gamma\n",
                                  "[dihedral:8]\nselectors = foo:1\n", "[dihedral:12]\n"])
def test_malformed_corpus(text):
    with pytest.raises(ValueError):
        parse_corpus(text)


def test_default_corpus_covers_the_families():
    specs = [e.spec for e in h.load_corpus(None)]
    for family in ("cyclic:", "elemab:", "dihedral:", "semidihedral:", "quaternion:", "extraspecial:", "product:"):
        assert any(s.startswith(family) for s in specs)
    assert {"extraspecial:3,p", "extraspecial:3,p2", "dihedral:32", "quaternion:32", "semidihedral:32"} <= set(specs)
