import json
from fractions import Fraction

import pytest

from digitop import auditor
from digitop.auditor import (
    AssertionSchema,
    Claim,
    falsify,
    load_claims,
    parse_schema,
    report_from_dict,
    report_to_dict,
    report_to_json,
    report_to_markdown,
    run_registry,
    verify_geraghty_triviality,
    verify_gconst,
    verify_jk34_35_refutation,
    verify_jk_remark32_refutation,
    verify_kandt,
    verify_krishna_special_case,
    verify_nonconverge_example,
    verify_psi_trivialities,
    verify_shukla31_refutation,
    verify_wus_collapse,
)
from digitop.classifiers import LinearFn
from digitop.errors import BudgetExceededError, UnknownClaimError
from digitop.lattice import DigitalImage
from digitop.maps import AffineIntMap, SelfMap
from digitop.metrics import MetricSpace, MetricSpec

# The statuses the registry must carry, per the review's verdicts.
REQUIRED_STATUSES = {
    "bhardwaj-4.1": "UNPROVEN",
    "bhardwaj-4.2": "UNPROVEN",
    "chauhan-3.1": "UNPROVEN",
    "chauhan-ex-3.2": "INVALID-SETTING",
    "jaink-4.1": "UNPROVEN",
    "jainr-4.1": "UNPROVEN",
    "jk-remark-3.2": "REFUTED",
    "jk-thm-3.4": "REFUTED",
    "jk-thm-3.5": "REFUTED",
    "jk-ex-3.7": "INVALID-SETTING",
    "kalj-3.1": "TRIVIAL",
    "kalj-3.2": "TRIVIAL",
    "kamesmari-thm": "DUPLICATE",
    "krishna-2.2": "UNPROVEN",
    "krishna-tatajee-thm": "CORRECT",
    "masmali-3.1": "UNPROVEN",
    "masmali-3.2": "UNPROVEN",
    "masmali-3.3": "UNPROVEN",
    "masmali-3.4": "UNPROVEN",
    "masmali-3.5": "UNPROVEN",
    "masmali-4.1": "UNPROVEN",
    "masmali-4.2": "UNPROVEN",
    "masmali-4.3": "UNPROVEN",
    "masmali-4.4": "UNPROVEN",
    "shukla-3.1": "REFUTED",
    "shukla-3.2": "UNPROVEN",
    "shukla-3.3": "UNPROVEN",
    "shukla-3.4": "UNPROVEN",
    "shukla-3.5": "UNPROVEN",
}


def test_registry_completeness():
    claims = {c.id: c for c in load_claims()}
    for cid, status in REQUIRED_STATUSES.items():
        assert cid in claims, cid
        assert claims[cid].expected_status == status, cid


def test_claim_invariants_enforced():
    with pytest.raises(ValueError, match="needs a verifier"):
        Claim("x", "src", "sum", "REFUTED")
    with pytest.raises(ValueError, match="must not name"):
        Claim("x", "src", "sum", "UNPROVEN", verifier="shukla31_refutation")
    with pytest.raises(ValueError, match="unknown status"):
        Claim("x", "src", "sum", "MAYBE")


def test_shukla_refutation_confirmed():
    outcome = verify_shukla31_refutation()
    assert outcome.verdict == "CONFIRMED"
    rows = outcome.witness["inequalities"]
    assert len(rows) == 16
    assert all(row["holds"] for row in rows)
    assert all(row["rhs"] == 2.0 for row in rows)
    assert outcome.witness["common_fixed_points"] == []


def test_shukla_refutation_sanity_inversion(diamond):
    outcome = verify_shukla31_refutation(t=SelfMap.identity(diamond))
    assert outcome.verdict == "FAILED"


def test_shukla_refutation_other_alpha():
    assert verify_shukla31_refutation(alpha=Fraction(1, 4)).verdict == "CONFIRMED"
    assert verify_shukla31_refutation(alpha=Fraction(1, 2)).verdict == "FAILED"


def test_jk_remark32_refutation():
    outcome = verify_jk_remark32_refutation()
    assert outcome.verdict == "CONFIRMED"
    assert outcome.witness["failing_pair"] == [[0], [1]]
    # With psi the identity the inequality holds: no refutation instance.
    assert verify_jk_remark32_refutation(psi=LinearFn(Fraction(1))).verdict == "FAILED"
    assert verify_jk_remark32_refutation(alpha_value=Fraction(0)).verdict == "FAILED"


def test_jk34_35_refutation():
    assert verify_jk34_35_refutation().verdict == "CONFIRMED"
    assert verify_jk34_35_refutation(AffineIntMap(1, 0)).verdict == "FAILED"
    assert verify_jk34_35_refutation(AffineIntMap(0, 5)).verdict == "FAILED"


def test_nonconverge_example():
    assert verify_nonconverge_example(5).verdict == "CONFIRMED"
    assert verify_nonconverge_example(3).verdict == "CONFIRMED"
    with pytest.raises(ValueError):
        verify_nonconverge_example(2)


def test_nonconverge_sanity_inversion():
    image = DigitalImage.of([(k,) for k in range(6)], u=1)
    fixed_at_one = SelfMap.from_table(
        image, {(k,): (1,) for k in range(6)}
    )
    assert verify_nonconverge_example(5, s=fixed_at_one).verdict == "FAILED"


def test_psi_trivialities():
    outcome = verify_psi_trivialities()
    assert outcome.verdict == "CONFIRMED"
    assert outcome.witness["linear1_partial_sum"] == "1000"


def test_geraghty_triviality_examples(path4, path3, split):
    for spec in (MetricSpec.l1(), MetricSpec.l2(), MetricSpec.linf(), MetricSpec.shortest_path()):
        outcome = verify_geraghty_triviality(path4, MetricSpace(path4, spec))
        assert outcome.verdict == "CONFIRMED"
        assert outcome.witness["maps_checked"] == 256
    outcome = verify_geraghty_triviality(path3, MetricSpace(path3, MetricSpec.shortest_path()))
    assert outcome.verdict == "CONFIRMED"
    assert outcome.witness["maps_checked"] == 27
    outcome = verify_geraghty_triviality(split, MetricSpace(split, MetricSpec.l1()))
    assert outcome.verdict == "SKIPPED"


def test_gconst_and_krishna_on_path3(path3, path3_l1):
    outcome = verify_gconst(path3, path3_l1)
    assert outcome.verdict == "CONFIRMED"
    assert outcome.witness["qualifying_pairs"] > 0
    outcome = verify_krishna_special_case(path3, path3_l1)
    assert outcome.verdict == "CONFIRMED"
    assert outcome.witness["qualifying_pairs"] > 0


def test_wus_collapse_on_catalog_images(path4, path4_l1, diamond, diamond_l2):
    assert verify_wus_collapse(path4, path4_l1).verdict == "CONFIRMED"
    assert verify_wus_collapse(diamond, diamond_l2).verdict == "CONFIRMED"


def test_kandt_on_catalog_images(path4, path4_l1, diamond, diamond_l2):
    for image, space in ((path4, path4_l1), (diamond, diamond_l2)):
        outcome = verify_kandt(image, space)
        assert outcome.verdict == "CONFIRMED"
        assert outcome.witness["geraghty_maps"] >= len(image)


def test_kandt_with_nonconstant_contraction():
    image = DigitalImage.of([(0,), (3,), (4,)], u=1)
    space = MetricSpace(image, MetricSpec.l1())
    outcome = verify_kandt(image, space)
    assert outcome.verdict == "CONFIRMED"
    # This carrier admits nonconstant strict-decrease maps, e.g.
    # 0 -> 3 -> 4 -> 4, so the sweep covers more than the constants.
    assert outcome.witness["geraghty_maps"] > 3


def test_run_registry_full():
    report = run_registry()
    assert report.ok
    assert report.summary["mismatched"] == 0
    assert report.summary["failed"] == 0
    assert report.summary["claims"] == len(load_claims())


def test_run_registry_filter_and_unknown_id():
    report = run_registry(["shukla-3.1"])
    assert len(report.results) == 1
    assert report.results[0].machine_verdict == "CONFIRMED"
    with pytest.raises(UnknownClaimError):
        run_registry(["no-such-claim"])


def test_report_round_trip_and_determinism():
    report = run_registry(["shukla-3.1", "jk-thm-3.4", "masmali-3.1"])
    raw = json.loads(report_to_json(report))
    assert report_from_dict(raw) == report

    again = run_registry(["shukla-3.1", "jk-thm-3.4", "masmali-3.1"])
    assert report_to_json(report, include_timing=False) == report_to_json(
        again, include_timing=False
    )
    md = report_to_markdown(report)
    assert "| shukla-3.1 | REFUTED | CONFIRMED |" in md


def shukla_schema(images=("path2", "split", "path3", "diamond", "path4", "square")):
    return parse_schema(
        {
            "name": "shukla-3.1",
            "arity": 2,
            "images": list(images),
            "metric": {"kind": "lp", "p": 2},
            "constants": {"alpha": ["49/100"]},
            "hypotheses": ["shukla31_bound"],
            "conclusion": "common_fixed_point",
        }
    )


def test_falsify_finds_shukla_witness():
    result = falsify(shukla_schema())
    assert result.witness is not None
    # Re-check the witness definitionally: bound holds, no common fixed point.
    from digitop.auditor import PREDICATES
    from digitop.catalog import catalog_image
    from digitop.fileio import parse_map

    image = catalog_image(result.witness["image"])
    space = MetricSpace(image, MetricSpec.l2())
    s = parse_map(result.witness["maps"][0], image)
    t = parse_map(result.witness["maps"][1], image)
    consts = {"alpha": Fraction(result.witness["constants"]["alpha"])}
    assert PREDICATES["shukla31_bound"].fn(space, (s, t), consts)
    assert not PREDICATES["common_fixed_point"].fn(space, (s, t), consts)


def test_falsify_restricted_to_diamond_finds_the_diamond_witness():
    result = falsify(shukla_schema(images=("diamond",)))
    assert result.witness is not None
    assert result.witness["image"] == "diamond"


def test_falsify_tautology_exhausts():
    schema = parse_schema(
        {
            "name": "tautology",
            "arity": 1,
            "images": ["path2", "path3"],
            "metric": {"kind": "lp", "p": 1},
            "hypotheses": ["s_geraghty"],
            "conclusion": "true",
        }
    )
    result = falsify(schema)
    assert result.exhausted
    assert result.checked == 4 + 27


def test_falsify_correct_theorem_exhausts():
    # Strict pairwise decrease implies a fixed point on every catalog
    # image: the scan must exhaust.
    schema = parse_schema(
        {
            "name": "geraghty-fixed-point",
            "arity": 1,
            "images": ["path2", "split", "path3", "diamond", "path4", "square"],
            "metric": {"kind": "lp", "p": 2},
            "hypotheses": ["s_geraghty"],
            "conclusion": "s_has_fixed_point",
        }
    )
    result = falsify(schema)
    assert result.exhausted


def test_falsify_budget_and_validation():
    with pytest.raises(BudgetExceededError):
        falsify(shukla_schema(), budget=100)
    with pytest.raises(Exception, match="unknown predicate"):
        parse_schema(
            {
                "name": "bad",
                "arity": 1,
                "images": ["path2"],
                "metric": {"kind": "lp", "p": 1},
                "hypotheses": ["nonsense"],
                "conclusion": "true",
            }
        )
    with pytest.raises(Exception, match="arity"):
        parse_schema(
            {
                "name": "bad",
                "arity": 1,
                "images": ["path2"],
                "metric": {"kind": "lp", "p": 1},
                "hypotheses": ["geraghty_pair"],
                "conclusion": "true",
            }
        )


def test_falsify_parallel_matches_sequential():
    schema = shukla_schema()
    sequential = falsify(schema, parallelism=1)
    parallel = falsify(schema, parallelism=4)
    assert sequential == parallel
