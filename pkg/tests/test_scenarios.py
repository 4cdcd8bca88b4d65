"""Config grammar, initial-datum families, persistence, and the pipeline."""

import math

import numpy as np
import pytest

from bfamlab import (
    ConfigurationError,
    RealField,
    SnapshotError,
    initial_data,
    make_grid,
    momentum,
    momentum_min,
    parse_config,
    read_snapshot,
    render_config,
    run_scenario,
    write_snapshot,
)
from bfamlab.scenarios import (
    DIAGNOSTIC_COLUMNS,
    DiagnosticsRow,
    Snapshot,
    emit_diagnostics,
    parse_diagnostics,
    snapshot_of,
)

MINIMAL = """
[run]
b = 2.0

[init]
family = sine
"""

SMALL_RUN = """
[grid]
n_points = 128
box_length = 80.0

[run]
b = 2.0
t_final = 0.2
dt_max = 0.02
sample_interval = 0.1

[init]
family = sech
amplitude = 0.25
width = 1.0

[output]
dir = {outdir}
"""


class TestInitialData:
    def test_sine_exact_at_nodes(self):
        grid = make_grid(64, 2 * np.pi)
        u = initial_data("sine", {"amplitude": 1.0, "mode": 1}, grid)
        assert np.array_equal(u.samples, np.sin(grid.x))

    def test_sine_mode_and_amplitude(self):
        grid = make_grid(64, 1.0)
        u = initial_data("sine", {"amplitude": 2.0, "mode": 3}, grid)
        assert np.allclose(u.samples, 2.0 * np.sin(6 * np.pi * grid.x))

    def test_momentum_bump_round_trip(self):
        grid = make_grid(512, 80.0)
        u = initial_data("momentum_bump", {"amplitude": 1.0, "width": 5.0}, grid)
        target = np.exp(-(((grid.x - 40.0) / 5.0) ** 2))
        target += np.exp(-(((grid.x - 120.0) / 5.0) ** 2))
        target += np.exp(-(((grid.x + 40.0) / 5.0) ** 2))
        m = momentum(u)
        assert np.max(np.abs(m.samples - target)) < 1e-12
        assert momentum_min(u) >= -1e-12

    def test_gaussian_periodization_is_smooth_at_seam(self):
        grid = make_grid(512, 80.0)
        u = initial_data("gaussian", {"amplitude": 1.0, "width": 1.5}, grid)
        assert abs(u.samples[0] - u.samples[-1]) < 1e-14

    def test_sech_fitted_radius(self):
        from bfamlab import fit_decay_radius
        from bfamlab.grid import dft

        grid = make_grid(2048, 80.0)
        u = initial_data("sech", {"amplitude": 1.0, "width": 1.0}, grid)
        fit = fit_decay_radius(dft(u))
        assert fit.sigma_hat == pytest.approx(np.pi / 2, rel=0.02)

    def test_unknown_family(self):
        grid = make_grid(64, 2 * np.pi)
        with pytest.raises(ConfigurationError):
            initial_data("square", {"amplitude": 1.0}, grid)

    def test_nonpositive_amplitude(self):
        grid = make_grid(64, 2 * np.pi)
        with pytest.raises(ConfigurationError):
            initial_data("gaussian", {"amplitude": 0.0, "width": 1.0}, grid)


class TestParseConfig:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL)
        assert cfg.grid.n_points == 512
        assert cfg.grid.box_length == pytest.approx(2 * math.pi)
        assert cfg.b == 2.0
        assert cfg.evolve.cfl_safety == 0.2
        assert cfg.diagnostics.s == 2.0
        assert cfg.init.family == "sine"

    def test_low_s_rejected_with_gevrey_diagnostics(self):
        text = MINIMAL + "\n[diagnostics]\nsigma_list = 0.5\ns = 1.0\n"
        with pytest.raises(ConfigurationError, match="s > 3/2"):
            parse_config(text)

    def test_low_s_allowed_without_gevrey_diagnostics(self):
        text = MINIMAL + "\n[diagnostics]\ns = 1.0\n"
        assert parse_config(text).diagnostics.s == 1.0

    def test_duplicate_key_rejected(self):
        text = "[run]\nb = 2.0\nb = 3.0\n\n[init]\nfamily = sine\n"
        with pytest.raises(ConfigurationError):
            parse_config(text)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown key"):
            parse_config(MINIMAL + "\n[grid]\nresolution = 64\n")

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown config section"):
            parse_config(MINIMAL + "\n[solver]\nname = rk4\n")

    def test_missing_required_keys(self):
        with pytest.raises(ConfigurationError):
            parse_config("[init]\nfamily = sine\n")
        with pytest.raises(ConfigurationError):
            parse_config("[run]\nb = 1.0\n")

    def test_unparsable_number(self):
        with pytest.raises(ConfigurationError):
            parse_config("[run]\nb = two\n\n[init]\nfamily = sine\n")

    def test_render_round_trip(self, tmp_path):
        text = SMALL_RUN.format(outdir=tmp_path / "out")
        cfg = parse_config(text)
        assert parse_config(render_config(cfg)) == cfg

    def test_gamma_override_must_be_negative(self):
        text = MINIMAL + "\n[diagnostics]\ngamma = 0.2\n"
        with pytest.raises(ConfigurationError):
            parse_config(text)


class TestSnapshotIO:
    def test_round_trip_bit_exact(self, tmp_path, rng):
        grid = make_grid(128, 5.0)
        u = RealField(grid, rng.standard_normal(128))
        path = tmp_path / "field.bgev"
        write_snapshot(path, snapshot_of(u, t=1.25, b=2.5))
        snap = read_snapshot(path)
        assert np.array_equal(snap.samples, u.samples)
        assert snap.t == 1.25 and snap.b == 2.5
        assert snap.n_points == 128 and snap.box_length == 5.0

    def test_corrupted_magic(self, tmp_path, rng):
        grid = make_grid(64, 1.0)
        path = tmp_path / "field.bgev"
        write_snapshot(path, snapshot_of(RealField(grid, rng.standard_normal(64)), 0.0, 2.0))
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(raw)
        with pytest.raises(SnapshotError, match="magic"):
            read_snapshot(path)

    def test_truncated_payload(self, tmp_path, rng):
        grid = make_grid(64, 1.0)
        path = tmp_path / "field.bgev"
        write_snapshot(path, snapshot_of(RealField(grid, rng.standard_normal(64)), 0.0, 2.0))
        raw = path.read_bytes()
        path.write_bytes(raw[:-16])
        with pytest.raises(SnapshotError, match="payload"):
            read_snapshot(path)

    def test_unsupported_version(self, tmp_path):
        grid = make_grid(64, 1.0)
        path = tmp_path / "field.bgev"
        snap = Snapshot(
            n_points=64, box_length=1.0, t=0.0, b=2.0,
            samples=np.zeros(64), version=99,
        )
        write_snapshot(path, snap)
        with pytest.raises(SnapshotError, match="version"):
            read_snapshot(path)


class TestDiagnosticsCsv:
    def row(self, t=0.5):
        return DiagnosticsRow(
            t=t, l2=1.1, h1=2.2, h2=3.3, mean_u=0.1, m_l1=4.4, m_min=-1e-12,
            sigma_hat=1.5, fit_quality=0.999, km_sigma_bound=-0.7, dt_used=0.01,
        )

    def test_empty_rows_header_only(self, tmp_path):
        path = tmp_path / "diag.csv"
        emit_diagnostics([], path)
        assert path.read_text() == ",".join(DIAGNOSTIC_COLUMNS) + "\n"

    def test_one_row_two_lines(self, tmp_path):
        path = tmp_path / "diag.csv"
        emit_diagnostics([self.row()], path)
        assert len(path.read_text().strip().splitlines()) == 2

    def test_round_trip_bit_identical(self, tmp_path, rng):
        rows = [
            DiagnosticsRow(*(float(v) for v in rng.standard_normal(11)))
            for _ in range(5)
        ]
        path = tmp_path / "diag.csv"
        emit_diagnostics(rows, path)
        back = parse_diagnostics(path.read_text())
        for a, b in zip(rows, back):
            assert a.values() == b.values()

    def test_companion_files(self, tmp_path):
        path = tmp_path / "diag.csv"
        emit_diagnostics([self.row(0.0), self.row(0.5)], path)
        sigma_dat = (tmp_path / "diag_sigma_hat.dat").read_text().splitlines()
        bound_dat = (tmp_path / "diag_km_bound.dat").read_text().splitlines()
        assert len(sigma_dat) == 2 and len(bound_dat) == 2
        t, sigma = sigma_dat[1].split()
        assert float(t) == 0.5 and float(sigma) == 1.5


class TestRunScenario:
    def test_artifacts_and_determinism(self, tmp_path):
        out = tmp_path / "runA"
        text = SMALL_RUN.format(outdir=out)
        cfg = parse_config(text)
        result = run_scenario(cfg, config_text=text)

        for name in (
            "config.ini",
            "diagnostics.csv",
            "diagnostics_sigma_hat.dat",
            "diagnostics_km_bound.dat",
            "initial.bgev",
            "final.bgev",
            "manifest.json",
        ):
            assert (out / name).exists(), name

        ts = [row.t for row in result.rows]
        assert ts == sorted(ts)
        assert all(np.isfinite(row.values()).all() for row in result.rows)

        # reproducibility from the persisted copy, modulo the output dir
        persisted = (out / "config.ini").read_text()
        cfg2 = parse_config(persisted)
        out2 = tmp_path / "runB"
        cfg2 = type(cfg2)(
            grid=cfg2.grid, b=cfg2.b, evolve=cfg2.evolve, init=cfg2.init,
            diagnostics=cfg2.diagnostics, output_dir=str(out2),
        )
        run_scenario(cfg2)
        a = (out / "diagnostics.csv").read_text()
        b = (out2 / "diagnostics.csv").read_text()
        assert a == b

    def test_manifest_reports_success(self, tmp_path):
        import json

        out = tmp_path / "run"
        text = SMALL_RUN.format(outdir=out)
        run_scenario(parse_config(text), config_text=text)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["exit_status"] == 0
        assert manifest["finished_unix"] >= manifest["started_unix"]

    def test_sparse_spectrum_yields_nan_fit_columns(self, tmp_path):
        # a pure sine never has enough usable modes for the decay fit; the
        # run still completes, with NaN in the fit columns
        text = """
[grid]
n_points = 64

[run]
b = -1.0
t_final = 0.1
dt_max = 0.01
sample_interval = 0.05

[init]
family = sine

[output]
dir = {outdir}
""".format(outdir=tmp_path / "sine_run")
        result = run_scenario(parse_config(text), config_text=text)
        assert all(math.isnan(row.sigma_hat) for row in result.rows)
        assert all(math.isnan(row.fit_quality) for row in result.rows)
        assert result.bound.gamma == -0.05
        assert all(np.isfinite(row.km_sigma_bound) for row in result.rows)
