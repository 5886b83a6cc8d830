"""Sweep grids, CSV determinism, presets, config parsing and CLI exit codes."""

import csv
import io
import math
import os

import numpy as np
import pytest

from cavneg.cli import main, parse_segments, read_config
from cavneg.scenario import Accelerated, Inertial
from cavneg.sweep import (
    Axis,
    ConfigError,
    NumericValidityError,
    SweepSpec,
    default_output_path,
    estimate_physical,
    parse_axis,
    parse_number,
    preset_spec,
    run_sweep,
)


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------- parsing


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1.5", 1.5),
        ("-2e-3", -2e-3),
        ("pi", math.pi),
        ("2pi", 2 * math.pi),
        ("2*pi", 2 * math.pi),
        ("pi/3", math.pi / 3),
        ("-2pi/3", -2 * math.pi / 3),
        ("0.5pi", 0.5 * math.pi),
        ("+pi", math.pi),
    ],
)
def test_parse_number(text, expected):
    assert parse_number(text) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("text", ["", "pie", "2pi/", "one", "pi3"])
def test_parse_number_rejects_garbage(text):
    with pytest.raises(ConfigError):
        parse_number(text)


def test_parse_axis():
    axis = parse_axis("u=0:2pi:101")
    assert axis.name == "u"
    assert axis.start == 0.0
    assert axis.stop == pytest.approx(2 * math.pi, rel=1e-15)
    assert axis.count == 101
    values = axis.values()
    assert len(values) == 101 and values[50] == pytest.approx(math.pi, rel=1e-15)


@pytest.mark.parametrize(
    "text", ["u=0:1", "q=0:1:5", "u=0:1:1", "u=0:1:x", "nonsense"]
)
def test_parse_axis_rejects_bad_input(text):
    with pytest.raises(ConfigError):
        parse_axis(text)


def test_parse_segments():
    segs = parse_segments("acc:+1:0.7,in:1.2,acc:-1:pi/2")
    assert segs == (
        Accelerated(1, 0.7),
        Inertial(1.2),
        Accelerated(-1, math.pi / 2),
    )
    with pytest.raises(ConfigError):
        parse_segments("acc:0.7")
    with pytest.raises(ConfigError):
        parse_segments("walk:1.0")


# ---------------------------------------------------------------- sweeps


def one_way_spec(**kw):
    base = dict(
        scenario="one-way",
        axes=(Axis("u", 0.0, 2 * math.pi, 21),),
        fixed={"k": 1, "h": 0.01},
    )
    base.update(kw)
    return SweepSpec(**base)


def test_sweep_is_deterministic():
    spec = one_way_spec()
    assert run_sweep(spec) == run_sweep(spec)


def test_worker_count_does_not_change_bytes():
    spec = one_way_spec(mode="general", fixed={"k": 1, "h": 0.01, "n_max": 100})
    single = run_sweep(spec)
    pooled = run_sweep(
        one_way_spec(mode="general", fixed={"k": 1, "h": 0.01, "n_max": 100}, workers=4)
    )
    assert single == pooled


def test_row_schema_and_negativity_identity():
    text = run_sweep(one_way_spec())
    rows = rows_of(text)
    assert len(rows) == 21
    header = text.splitlines()[0].split(",")
    assert header == [
        "scenario",
        "k",
        "h",
        "M",
        "u",
        "v",
        "w",
        "deficit_scaled",
        "negativity",
        "log_negativity",
        "method",
        "truncation_tail",
    ]
    for row in rows:
        h = float(row["h"])
        assert float(row["negativity"]) == 0.5 - h * h * float(row["deficit_scaled"])
        assert row["scenario"] == "one-way"
        assert row["method"] == "closed-form"


def test_round_trip_repr_of_floats():
    text = run_sweep(one_way_spec())
    row = rows_of(text)[3]
    # shortest repr must round-trip bit-exactly
    assert repr(float(row["deficit_scaled"])) == row["deficit_scaled"]


def test_both_mode_bounds_disagreement():
    spec = one_way_spec(
        mode="both", fixed={"k": 1, "h": 0.01, "n_max": 150}
    )
    rows = rows_of(run_sweep(spec))
    assert all("deficit_general" in r and "abs_difference" in r for r in rows)
    for row in rows:
        assert float(row["abs_difference"]) <= float(row["truncation_tail"])


def test_both_mode_requires_explicit_cutoff():
    with pytest.raises(ConfigError):
        run_sweep(one_way_spec(mode="both"))


def test_two_axis_order_is_lexicographic():
    spec = SweepSpec(
        scenario="alpha-centauri",
        axes=(Axis("u", 0.0, 1.0, 3), Axis("v", 0.0, 1.0, 2)),
        fixed={"k": 1, "h": 0.01},
    )
    rows = rows_of(run_sweep(spec))
    coords = [(float(r["u"]), float(r["v"])) for r in rows]
    assert coords == sorted(coords)


def test_fixed_phase_passes_through():
    spec = SweepSpec(
        scenario="round-trip",
        axes=(Axis("u", 0.0, 2.0, 3),),
        fixed={"k": 1, "h": 0.01, "v": 0.4, "w": 2 * math.pi / 3},
    )
    rows = rows_of(run_sweep(spec))
    assert all(float(r["v"]) == 0.4 for r in rows)
    assert all(float(r["w"]) == pytest.approx(2 * math.pi / 3) for r in rows)


def test_custom_scenario_single_row():
    spec = SweepSpec(
        scenario="custom",
        mode="general",
        segments=(Accelerated(1, 0.7), Inertial(1.2), Accelerated(-1, 0.7)),
        fixed={"k": 1, "h": 0.5, "n_max": 100},
    )
    rows = rows_of(run_sweep(spec))
    assert len(rows) == 1
    assert float(rows[0]["deficit_scaled"]) > 0


def test_custom_scenario_restrictions():
    segs = (Accelerated(1, 0.7),)
    with pytest.raises(ConfigError):
        run_sweep(SweepSpec(scenario="custom", mode="general", segments=segs,
                            axes=(Axis("u", 0, 1, 2),)))
    with pytest.raises(ConfigError):
        run_sweep(SweepSpec(scenario="custom", mode="general"))
    with pytest.raises(ConfigError):
        run_sweep(SweepSpec(scenario="custom", mode="closed-form", segments=segs))


def test_heavy_field_closed_form_only_one_way():
    spec = SweepSpec(
        scenario="alpha-centauri",
        axes=(Axis("u", 0.0, 1.0, 3),),
        fixed={"k": 1, "h": 1e-5, "M": 1e3},
    )
    with pytest.raises(ConfigError):
        run_sweep(spec)


def test_numeric_validity_guards():
    with pytest.raises(NumericValidityError):
        run_sweep(one_way_spec(fixed={"k": 1, "h": 3.0}))
    # h = 1.8 pushes the peak deficit over the 1/2 budget
    with pytest.raises(NumericValidityError):
        run_sweep(one_way_spec(fixed={"k": 1, "h": 1.8}))


def test_unknown_fixed_key_rejected():
    with pytest.raises(ConfigError):
        run_sweep(one_way_spec(fixed={"k": 1, "hh": 0.1}))


def test_k_list_emits_one_block_per_k():
    spec = one_way_spec(k_list=(1, 2))
    rows = rows_of(run_sweep(spec))
    assert [int(r["k"]) for r in rows] == [1] * 21 + [2] * 21


def test_output_file_written(tmp_path):
    out = tmp_path / "sweep.csv"
    text = run_sweep(one_way_spec(output=str(out)))
    assert out.read_text(encoding="utf-8") == text


def test_unwritable_output_raises_with_path():
    with pytest.raises(OSError, match="no/such/dir"):
        run_sweep(one_way_spec(output="/no/such/dir/out.csv"))


def test_default_output_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("CAVNEG_OUT_DIR", str(tmp_path))
    assert default_output_path("fig2", None) == str(tmp_path / "fig2.csv")
    assert default_output_path("fig2", "name.csv") == str(tmp_path / "name.csv")
    # explicit directories win over the variable
    assert default_output_path("fig2", "sub/name.csv") == "sub/name.csv"
    monkeypatch.delenv("CAVNEG_OUT_DIR")
    assert default_output_path("fig2", None) == "fig2.csv"


# ---------------------------------------------------------------- presets


def test_fig2_preset_shape():
    rows = rows_of(run_sweep(preset_spec("fig2")))
    assert len(rows) == 201
    deficits = np.array([float(r["deficit_scaled"]) for r in rows])
    u = np.array([float(r["u"]) for r in rows])
    assert deficits[0] == 0.0 and deficits[-1] == 0.0
    assert u[np.argmax(deficits)] == pytest.approx(math.pi, rel=1e-15)
    assert deficits.max() == pytest.approx(0.16525145161591603, rel=1e-10)


def test_fig3_preset_zero_lines():
    rows = rows_of(run_sweep(preset_spec("fig3")))
    assert len(rows) == 101 * 101
    for r in rows:
        u, v = float(r["u"]), float(r["v"])
        d = float(r["deficit_scaled"])
        on_locus = (
            min(u % (2 * math.pi), 2 * math.pi - u % (2 * math.pi)) < 1e-9
            or min((u + v) % (2 * math.pi), 2 * math.pi - (u + v) % (2 * math.pi))
            < 1e-9
        )
        assert (d < 1e-12) == on_locus


def test_fig4_presets_fix_w():
    for name, w in (("fig4a", 0.0), ("fig4b", 2 * math.pi / 3), ("fig4c", 4 * math.pi / 3)):
        spec = preset_spec(name)
        assert spec.scenario == "round-trip"
        assert spec.fixed["w"] == pytest.approx(w, rel=1e-15)


def test_fig5_presets():
    spec_a = preset_spec("fig5a")
    assert spec_a.k_list == (1, 2, 3, 4)
    assert spec_a.fixed["M"] == 1e3 and spec_a.fixed["h"] == 1e-5
    rows = rows_of(run_sweep(preset_spec("fig5b")))
    assert len(rows) == 2401 and all(int(r["k"]) == 30 for r in rows)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        preset_spec("fig9")


# ---------------------------------------------------------------- estimates


def test_estimate_massless_path():
    est = estimate_physical(10.0, 10.0)
    assert est.path == "massless"
    assert est.peak_deficit_scaled == pytest.approx(0.16525145161591603, rel=1e-10)
    assert est.peak_degradation == pytest.approx(
        est.h * est.h * est.peak_deficit_scaled
    )


def test_estimate_heavy_field_path():
    est = estimate_physical(10.0, 10.0, transverse_wavelength=500e-9)
    assert est.path == "heavy-field"
    assert est.M == pytest.approx(125663706.14359173, rel=1e-14)
    assert est.validity.massive_ok and est.validity.perturbative_ok
    assert 0.0 < est.peak_degradation < 0.5


def test_estimate_intermediate_mass_refused():
    with pytest.raises(ConfigError):
        estimate_physical(1.0, 1.0, transverse_wavelength=1.0, k=30)


# ---------------------------------------------------------------- CLI


def test_cli_preset_run(tmp_path, capsys):
    out = tmp_path / "fig2.csv"
    assert main(["--preset", "fig2", "--out", str(out)]) == 0
    assert "201 rows" in capsys.readouterr().out
    assert out.exists()


def test_cli_flag_overrides(tmp_path):
    out = tmp_path / "o.csv"
    code = main(
        [
            "--scenario",
            "one-way",
            "--axis",
            "u=0:pi:5",
            "--k",
            "2",
            "--h",
            "0.02",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    rows = rows_of(out.read_text(encoding="utf-8"))
    assert len(rows) == 5
    assert all(r["k"] == "2" and r["h"] == "0.02" for r in rows)


def test_cli_config_file_matches_flags(tmp_path):
    config = tmp_path / "sweep.cfg"
    config.write_text(
        "# one-way sweep\n"
        "scenario = one-way\n"
        "u = 0:2pi:11\n"
        "k = 1\n"
        "h = 0.01\n",
        encoding="utf-8",
    )
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(["--config", str(config), "--out", str(out_a)]) == 0
    assert (
        main(
            ["--scenario", "one-way", "--axis", "u=0:2pi:11", "--k", "1",
             "--h", "0.01", "--out", str(out_b)]
        )
        == 0
    )
    assert out_a.read_text(encoding="utf-8") == out_b.read_text(encoding="utf-8")


def test_cli_config_fixed_phase(tmp_path):
    config = tmp_path / "rt.cfg"
    config.write_text(
        "scenario = round-trip\nu = 0:2pi:5\nv = 0:2pi:5\nw = 2pi/3\n",
        encoding="utf-8",
    )
    out = tmp_path / "rt.csv"
    assert main(["--config", str(config), "--out", str(out)]) == 0
    rows = rows_of(out.read_text(encoding="utf-8"))
    assert len(rows) == 25
    assert all(
        float(r["w"]) == pytest.approx(2 * math.pi / 3, rel=1e-15) for r in rows
    )


def test_read_config_rejects_unknown_keys(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("wibble = 3\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_config(str(bad))


def test_cli_exit_codes(tmp_path, capsys):
    # unknown flag -> usage error
    assert main(["--frobnicate"]) == 1
    # missing scenario and preset
    assert main([]) == 1
    # numeric validity: |h| >= 2
    assert (
        main(["--scenario", "one-way", "--axis", "u=0:1:3", "--h", "2.5",
              "--out", str(tmp_path / "x.csv")])
        == 2
    )
    # unwritable output
    assert (
        main(["--scenario", "one-way", "--axis", "u=0:1:3",
              "--out", "/no/such/dir/x.csv"])
        == 1
    )
    capsys.readouterr()


def test_cli_estimate(capsys):
    assert main(["--estimate", "--accel", "10", "--delta", "10",
                 "--wavelength", "500e-9"]) == 0
    out = capsys.readouterr().out
    assert "1.25664e+08" in out
    assert "massive_ok = True" in out
    assert main(["--estimate", "--accel", "10"]) == 1


def test_cli_custom_segments(tmp_path):
    out = tmp_path / "c.csv"
    code = main(
        [
            "--scenario", "custom",
            "--segments", "acc:+1:0.7,in:1.2,acc:-1:0.7",
            "--h", "0.5",
            "--n-max", "100",
            "--out", str(out),
        ]
    )
    assert code == 0
    assert len(rows_of(out.read_text(encoding="utf-8"))) == 1


def test_cli_env_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CAVNEG_OUT_DIR", str(tmp_path))
    monkeypatch.chdir(tmp_path)
    assert main(["--scenario", "one-way", "--axis", "u=0:1:3"]) == 0
    capsys.readouterr()
    assert (tmp_path / "one-way.csv").exists()


def test_cli_verify_fast_passes(capsys):
    assert main(["--verify", "fast"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
