from momentcrit.regression import run_regression_suite


def test_regression_suite_all_pass():
    report = run_regression_suite()
    failed = [r for r in report.results if not r.passed]
    details = "; ".join(f"{r.fixture_id}: {r.error or r.actual}" for r in failed)
    assert report.ok, f"{report.failed} fixture(s) failed: {details}"
    assert report.passed >= 35


def test_regression_harness_detects_perturbation():
    report = run_regression_suite(
        expected_overrides={"singlet.pt_det": -1 / 16 + 1e-3}
    )
    failed = [r.fixture_id for r in report.results if not r.passed]
    assert failed == ["singlet.pt_det"]
