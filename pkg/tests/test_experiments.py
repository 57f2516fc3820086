import json
import math
import os

import pytest

from leakydisk import experiments
from leakydisk.cli import main
from leakydisk.potential import PotentialSpec


@pytest.fixture(scope="module")
def small_scan():
    pot = PotentialSpec(1.0, 0.0)
    return experiments.scan_spectrum(pot, (5.0, 14.0), (0, 6)), pot


class TestScan:
    def test_matches_brute_force(self, small_scan):
        import oracles
        from leakydisk.secular import secular_fdf

        records, _pot = small_scan
        for n in range(0, 7):
            mine = [r for r in records if r.n == n]
            oracle = oracles.grid_roots(secular_fdf(n, 1.0), (5.0, 14.0), (-4.8, 0.05),
                                        nx=24, ny=12)
            assert len(mine) == len(oracle)
            for a, b in zip(sorted(oracle, key=lambda z: z.real), mine):
                assert abs(a - b.lam) <= 1e-7

    def test_record_invariants(self, small_scan):
        records, _ = small_scan
        for r in records:
            assert r.im_lambda <= 0.0
            assert r.certified and r.residual <= 1e-9
            assert r.multiplicity == (2 if r.n >= 1 else 1)

    def test_sorted_by_mode_then_re(self, small_scan):
        records, _ = small_scan
        keys = [(r.n, r.re_lambda) for r in records]
        assert keys == sorted(keys)


class TestCsvRoundTrip:
    def test_deterministic_and_invertible(self, small_scan, tmp_path):
        records, pot = small_scan
        meta = {"V0": pot.V0, "alpha": pot.alpha}
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        experiments.write_spectrum_csv(str(p1), records, meta)
        experiments.write_spectrum_csv(str(p2), records, meta)
        assert p1.read_bytes() == p2.read_bytes()
        back, meta2 = experiments.read_spectrum_csv(str(p1))
        assert meta2["alpha"] == 0.0 and meta2["schema"]
        assert len(back) == len(records)
        for a, b in zip(back, records):
            assert a == b  # repr round trip is exact for floats

    def test_scan_determinism(self):
        pot = PotentialSpec(1.0, 0.0)
        a = experiments.scan_spectrum(pot, (6.0, 10.0), (0, 3))
        b = experiments.scan_spectrum(pot, (6.0, 10.0), (0, 3))
        assert a == b


class TestVerifyFreeRegions:
    def test_fabricated_shallow_record_flagged(self):
        pot = PotentialSpec(1.0, 0.0)
        fake = experiments.SpectrumRecord(0, 100.0, -0.1, 0.0, True, "normal",
                                          math.inf, 1)
        assert experiments.verify_free_regions([fake], pot) == [fake]

    def test_real_scan_clean(self):
        pot = PotentialSpec(1.0, 0.0)
        records = experiments.scan_spectrum(pot, (50.0, 58.0), (0, 20))
        assert records
        assert experiments.verify_free_regions(records, pot) == []


class TestCounting:
    def test_bookkeeping_and_monotonicity(self):
        pot = PotentialSpec(1.0, 0.0)
        t30, meta30 = experiments.count_in_box(pot, 1.0 / 30.0)
        t50, meta50 = experiments.count_in_box(pot, 1.0 / 50.0)
        assert t50 > t30 > 0
        assert meta30["completeness_failures"] == 0
        assert meta50["completeness_failures"] == 0

    def test_multiplicity_identity(self):
        # total equals n=0 roots plus twice the n>=1 roots
        pot = PotentialSpec(1.0, 0.0)
        lo, hi = 0.95 * 30, 1.05 * 30
        records = experiments.scan_spectrum(pot, (lo, hi), (0, 31), full_contour=False)
        depth = 2.0 * math.log(30.0)
        kept = [r for r in records if r.im_lambda >= -depth]
        total = sum(r.multiplicity for r in kept)
        n0 = sum(1 for r in kept if r.n == 0)
        rest = sum(1 for r in kept if r.n >= 1)
        assert total == n0 + 2 * rest


class TestConfig:
    def test_parse(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nalpha = 0.5\nv0 = 2.0  # inline\n\nre_max=60\n")
        out = experiments.load_config(str(cfg))
        assert out == {"alpha": "0.5", "v0": "2.0", "re_max": "60"}

    def test_bad_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha 0.5\n")
        with pytest.raises(ValueError):
            experiments.load_config(str(cfg))


class TestFigurePipeline:
    def test_fig2_tiny_deterministic(self, tmp_path):
        out1 = tmp_path / "r1"
        out2 = tmp_path / "r2"
        for out in (out1, out2):
            paths = experiments.figure_pipeline("fig2", str(out),
                                                re_range=(5.0, 12.0), n_max=4)
            assert len(paths) == 2
        s1 = (out1 / "fig2_alpha0p0000_spectrum.csv").read_bytes()
        s2 = (out2 / "fig2_alpha0p0000_spectrum.csv").read_bytes()
        assert s1 == s2
        records, meta = experiments.read_spectrum_csv(
            str(out1 / "fig2_alpha0p0000_spectrum.csv"))
        assert records and meta["figure"] == "fig2"
        curves = (out1 / "fig2_alpha0p0000_curves.csv").read_text().splitlines()
        assert curves[1].startswith("re_lambda,log_bound,band_1")

    def test_unknown_figure(self, tmp_path):
        with pytest.raises(ValueError):
            experiments.figure_pipeline("fig9", str(tmp_path))


class TestCli:
    def test_scan_and_verify_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "scan"
        rc = main(["scan", "--alpha", "0", "--v0", "1", "--re-min", "6",
                   "--re-max", "10", "--n-max", "3", "--out", str(out)])
        assert rc == 0
        spectrum = out / "spectrum.csv"
        assert spectrum.exists() and (out / "curves.csv").exists()
        rc = main(["verify", "--alpha", "0", "--v0", "1",
                   "--spectrum", str(spectrum)])
        assert rc == 0  # nothing to flag below Re = 50

    def test_verify_flags_violation(self, tmp_path, capsys):
        pot = PotentialSpec(1.0, 0.0)
        fake = experiments.SpectrumRecord(0, 100.0, -0.1, 0.0, True, "normal",
                                          math.inf, 1)
        path = tmp_path / "bad.csv"
        experiments.write_spectrum_csv(str(path), [fake], {})
        rc = main(["verify", "--alpha", "0", "--v0", "1", "--spectrum", str(path)])
        assert rc == 2

    def test_predict_json(self, capsys):
        rc = main(["predict", "--alpha", "0", "--v0", "1", "--center", "100",
                   "--kind", "normal", "--n", "0"])
        assert rc == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
        assert lines
        rec = json.loads(lines[0])
        assert rec["kind"] == "normal" and rec["im_lambda"] < 0

    def test_specfun_eval_json(self, capsys):
        rc = main(["specfun", "eval", "--kind", "J", "--n", "2", "--z", "5.0,-1.0"])
        assert rc == 0
        rec = json.loads(capsys.readouterr().out.strip())
        assert rec["regime"] == "series"
        assert rec["wronskian_residual"] < 1e-10
        rc = main(["specfun", "eval", "--kind", "zeta", "--z", "1.1,0.0"])
        assert rc == 0

    def test_numeric_failure_exit_code(self, capsys):
        rc = main(["specfun", "eval", "--kind", "J", "--n", "0", "--z", "0.0,0.0"])
        assert rc == 3

    def test_config_file_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("alpha = 1.0\nv0 = 2.0\n")
        rc = main(["predict", "--config", str(cfg), "--center", "150",
                   "--kind", "normal", "--n", "0"])
        assert rc == 0
        rec = json.loads(capsys.readouterr().out.splitlines()[0])
        # alpha = 1, V0 = 2: depth = (1/4) log(1 + 4/V0^2) = (1/4) log 2
        assert -rec["im_lambda"] == pytest.approx(0.25 * math.log(2.0), abs=0.01)
