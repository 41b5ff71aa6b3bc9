import json

import numpy as np
import pytest

from momentcrit.cli import (
    EXIT_CONFIG,
    EXIT_ENTANGLED,
    EXIT_OK,
    RunConfig,
    main,
    run,
)
from momentcrit.fock import Monomial
from momentcrit.moments import moment
from momentcrit import states


def test_library_singlet_and_bell():
    s = states.singlet()
    np.testing.assert_allclose(
        s.amplitudes, [0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0], atol=1e-15
    )
    b = states.bell_phi_plus()
    np.testing.assert_allclose(
        b.amplitudes, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-15
    )


def test_library_product_coherent_vacuum():
    vac = states.product_coherent(0.0, 0.0)
    assert vac.amplitudes[0] == 1.0


def test_library_cat_double_prime_parameters():
    state = states.cat_double_prime(0.3, 0.2)
    # antisymmetric under global sign flip of both amplitudes: only odd total
    # photon-number amplitudes survive
    grid = state.amplitudes.reshape(state.cutoffs.cutoffs)
    for n1 in range(grid.shape[0]):
        for n2 in range(grid.shape[1]):
            if (n1 + n2) % 2 == 0:
                assert abs(grid[n1, n2]) < 1e-14


def test_library_unknown_name():
    with pytest.raises(KeyError):
        states.build_state("nope")


def test_build_state_with_overrides():
    s = states.build_state("singlet", cutoff=3)
    assert s.cutoffs.cutoffs == (3, 3)
    c = states.build_state("cat_double_prime", {"alpha": 0.3, "beta": 0.2}, epsilon=1e-8)
    assert max(c.cutoffs.cutoffs) <= 8


def test_library_thermal_mean_occupation():
    th = states.thermal(0.7, cutoff=50)
    n = moment(th, Monomial(((1, 1),)))
    assert abs(n - 0.7) < 1e-9


def test_config_round_trip():
    raw = {
        "state": {"library": "singlet"},
        "criteria": [
            {"name": "pt_norm", "class": {"side_a": ["1", "a"], "side_b": ["1", "b"]}},
            {"name": "hz_two_mode"},
        ],
        "epsilon": 1e-10,
        "format": "structured",
    }
    cfg = RunConfig.from_dict(raw)
    again = RunConfig.from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()


def test_config_rejects_unknown_criterion():
    with pytest.raises(ValueError):
        RunConfig.from_dict({"state": {"library": "singlet"}, "criteria": [{"name": "zzz"}]})


def test_empty_criteria_is_valid_empty_report():
    cfg = RunConfig.from_dict({"state": {"library": "singlet"}, "criteria": []})
    report = run(cfg)
    assert report["verdicts"] == []
    assert report["entangled_count"] == 0


def test_run_reports_fixture_values():
    cfg = RunConfig.from_dict(
        {
            "state": {"library": "singlet"},
            "criteria": [{"name": "pt_norm"}, {"name": "realign_norm"}],
        }
    )
    report = run(cfg)
    target = (1 + np.sqrt(2)) / 2
    assert abs(report["verdicts"][0]["witness"]["nu_gamma"] - target) < 1e-9
    assert abs(report["verdicts"][1]["witness"]["nu_realign"] - target) < 1e-9
    assert report["entangled_count"] == 2


def test_run_surfaces_per_criterion_errors_without_aborting():
    cfg = RunConfig.from_dict(
        {
            "state": {"library": "ghz3"},
            "criteria": [
                {"name": "sv_cat"},  # two-mode criterion on a 3-mode state
                {"name": "hz_three_mode", "variant": 1},
            ],
        }
    )
    report = run(cfg)
    assert report["verdicts"][0]["outcome"] == "ERROR"
    assert report["verdicts"][1]["outcome"] in ("ENTANGLED", "INCONCLUSIVE")


def test_cli_analyze_exit_codes(tmp_path, capsys):
    cfg = {
        "state": {"library": "singlet"},
        "criteria": [{"name": "pt_norm"}],
        "format": "structured",
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    code = main(["analyze", str(path)])
    out = capsys.readouterr().out
    assert code == EXIT_ENTANGLED
    payload = json.loads(out)
    assert payload["schema"] == "momentcrit-report/1"
    assert payload["entangled_count"] == 1

    cfg["state"] = {"library": "product_coherent", "params": {"alpha": 0.2, "beta": 0.1}}
    path.write_text(json.dumps(cfg))
    assert main(["analyze", str(path)]) == EXIT_OK


def test_cli_config_error_diagnostics(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ not json")
    assert main(["analyze", str(path)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "line" in err and "column" in err

    path.write_text(json.dumps({"criteria": []}))
    assert main(["analyze", str(path)]) == EXIT_CONFIG
    assert "state" in capsys.readouterr().err


def test_cli_out_file_and_overrides(tmp_path):
    cfg = {
        "state": {"library": "singlet"},
        "criteria": [{"name": "pt_min_eig"}],
        "format": "structured",
    }
    path = tmp_path / "c.json"
    out = tmp_path / "report.json"
    path.write_text(json.dumps(cfg))
    code = main(["analyze", str(path), "--out", str(out), "--tol", "1e-3"])
    assert code == EXIT_ENTANGLED
    payload = json.loads(out.read_text())
    assert payload["verdicts"][0]["tol"] == 1e-3


def test_cli_complex_serialization(tmp_path, capsys):
    cfg = {
        "state": {
            "amplitudes": [[0, 0], [0.7071067811865476, 0], [-0.7071067811865476, 0], [0, 0]],
            "cutoffs": [2, 2],
            "label": "explicit-singlet",
        },
        "criteria": [{"name": "pt_sylvester", "r": [1, 4]}],
        "format": "structured",
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    code = main(["analyze", str(path)])
    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_ENTANGLED
    sub = payload["verdicts"][0]["witness"]["submatrix"]
    # complex entries serialized as [re, im] pairs
    assert len(sub[0][0]) == 2
    assert abs(sub[0][0][0] - 1.0) < 1e-12 and sub[0][0][1] == 0.0
    assert abs(sub[0][1][0] + 0.5) < 1e-12


def test_cli_list_commands(capsys):
    assert main(["list-states"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("singlet", "bell_phi_plus", "partial_example2", "cat_prime",
                 "cat_double_prime", "ghz3", "w3", "product_coherent", "fock"):
        assert name in out
    assert main(["list-criteria"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("pt_norm", "realign_norm", "map", "hz_two_mode", "state_ppt"):
        assert name in out


def test_cli_regress_passes(capsys):
    assert main(["regress"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out
    assert "0 failed" in out


def test_cli_density_input(tmp_path, capsys):
    rho = np.eye(4) / 4
    cfg = {
        "state": {
            "density": [[[float(x.real), 0.0] for x in row] for row in rho.astype(complex)],
            "cutoffs": [2, 2],
        },
        "criteria": [{"name": "state_ppt", "dims": [2, 2]}],
        "format": "structured",
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert main(["analyze", str(path)]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    outcomes = {v["criterion"]: v["outcome"] for v in payload["verdicts"]}
    assert outcomes["state_pt_min_eig"] == "SEPARABLE"
