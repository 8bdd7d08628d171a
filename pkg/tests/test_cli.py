import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from curvkit.curvature import CurvatureKind, curvature_all, write_curvature_csv
from curvkit.graph import parse_edge_list
from curvkit.metrics import ari, lpa_detect
from curvkit.sbm import SbmSpec, sample_sbm

VECTORS = json.loads(
    (Path(__file__).resolve().parent.parent / "vectors" / "cases.json").read_text()
)


def run_cli(*args, expect=0):
    proc = subprocess.run(
        [sys.executable, "-m", "curvkit", *map(str, args)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == expect, (proc.returncode, proc.stderr, args)
    return proc


def write_edges(path: Path, edges) -> Path:
    path.write_text("".join(f"{u}\t{v}\n" for u, v in edges))
    return path


def sample_vector(name):
    spec = next(s for s in VECTORS["sample"] if s["name"] == name)
    return SbmSpec.from_probs(spec["n"], spec["k"], spec["p1"], spec["p2"], spec["seed"])


class TestCurvatureCommand:
    def test_triangle_lrc(self, tmp_path):
        f = write_edges(tmp_path / "tri.txt", [(0, 1), (0, 2), (1, 2)])
        out = run_cli("curvature", "--input", f, "--measure", "lrc").stdout
        assert out.splitlines() == ["u,v,curvature", "0,1,1.5", "0,2,1.5", "1,2,1.5"]

    def test_k2_orc(self, tmp_path):
        f = write_edges(tmp_path / "k2.txt", [(0, 1)])
        out = run_cli("curvature", "--input", f, "--measure", "orc").stdout
        assert out.splitlines() == ["u,v,curvature", "0,1,0"]

    def test_missing_file(self):
        proc = run_cli("curvature", "--input", "/nonexistent/g.txt", expect=2)
        err = json.loads(proc.stderr)
        assert "/nonexistent/g.txt" in err["error"]
        assert err["code"] == 2

    def test_unknown_flag_rejected(self, tmp_path):
        f = write_edges(tmp_path / "tri.txt", [(0, 1), (0, 2), (1, 2)])
        proc = subprocess.run(
            [sys.executable, "-m", "curvkit", "curvature", "--input", str(f), "--bogus", "1"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2

    def test_vectors_match_library(self, tmp_path):
        for case in VECTORS["curvature"]:
            f = write_edges(tmp_path / f"{case['name']}.txt", case["edges"])
            out = run_cli("curvature", "--input", f, "--measure", case["kind"]).stdout
            with open(f) as fh:
                g = parse_edge_list(fh)
            buf = io.StringIO()
            write_curvature_csv(g, curvature_all(g, CurvatureKind(case["kind"])), buf)
            assert out == buf.getvalue()


class TestPreprocessCommand:
    def _sampled_file(self, tmp_path, name):
        spec = sample_vector(name)
        f = tmp_path / f"{name}.txt"
        run_cli(
            "sample", "--n", spec.n, "--k", spec.k,
            "--p1", spec.block_matrix[0, 0],
            "--p2", spec.block_matrix[0, 1] if spec.k > 1 else 0.0,
            "--seed", spec.seed, "--out", f,
        )
        return f

    def test_sbm_auto(self, tmp_path):
        f = self._sampled_file(tmp_path, "sbm-60")
        out = tmp_path / "pruned.txt"
        rpt = tmp_path / "report.json"
        run_cli("preprocess", "--input", f, "--out", out, "--report", rpt)
        report = json.loads(rpt.read_text())
        assert report["mode"] == "valley"
        assert report["edges_after"] < report["edges_before"]
        with open(out) as fh:
            pruned = parse_edge_list(fh)
        assert pruned.m == report["edges_after"]

    def test_explicit_threshold_bypasses_gmm(self, tmp_path):
        f = self._sampled_file(tmp_path, "sbm-60")
        out = tmp_path / "pruned.txt"
        rpt = tmp_path / "report.json"
        run_cli(
            "preprocess", "--input", f, "--out", out, "--report", rpt,
            "--threshold", "0.0",
        )
        report = json.loads(rpt.read_text())
        assert report["mode"] == "manual" and report["beta"] == 0.0
        with open(f) as fh:
            g = parse_edge_list(fh)
        lrc = curvature_all(g, CurvatureKind.LRC).values
        assert report["edges_after"] == int(np.count_nonzero(lrc >= 0.0))

    def test_unimodal_er_skips(self, tmp_path):
        f = self._sampled_file(tmp_path, "er-150")
        out = tmp_path / "pruned.txt"
        rpt = tmp_path / "report.json"
        run_cli("preprocess", "--input", f, "--out", out, "--report", rpt)
        report = json.loads(rpt.read_text())
        assert report["mode"] == "degenerate_skip"
        assert out.read_text() == f.read_text()

    def test_insufficient_edges_exit3(self, tmp_path):
        f = write_edges(tmp_path / "tri.txt", [(0, 1), (0, 2), (1, 2)])
        proc = run_cli(
            "preprocess", "--input", f, "--out", tmp_path / "o.txt", expect=3
        )
        assert "insufficient data" in json.loads(proc.stderr)["error"]


class TestSimulateCommand:
    def test_row_count_default_grid(self, tmp_path):
        out = tmp_path / "grid.csv"
        run_cli(
            "simulate", "--replicates", 1, "--seed", 4, "--n", 20, "--k", 2,
            "--curvatures", "lrc,frc,bfc,orc", "--out", out,
        )
        lines = out.read_text().splitlines()
        assert lines[0] == "p1,p2,curvature,score,value,replicates,base_seed"
        assert len(lines) == 1 + 100 * 4 * 3

    def test_zero_replicates_error(self):
        proc = run_cli("simulate", "--replicates", 0, "--seed", 1, expect=3)
        assert "replicate" in json.loads(proc.stderr)["error"]

    def test_same_seed_byte_identical(self, tmp_path):
        args = (
            "simulate", "--replicates", 3, "--seed", 11, "--n", 40, "--k", 2,
            "--p1", "0.7,0.5", "--p2", "0.1", "--curvatures", "lrc",
        )
        a = run_cli(*args, "--out", tmp_path / "a.csv")
        b = run_cli(*args, "--out", tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_bad_grid_rejected(self):
        proc = run_cli(
            "simulate", "--replicates", 1, "--seed", 1,
            "--p1", "0.3", "--p2", "0.3", expect=3,
        )
        assert "p2 < p1" in json.loads(proc.stderr)["error"]


class TestDetectAndEval:
    def test_components_two_triangles(self, tmp_path):
        f = write_edges(tmp_path / "g.txt", [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
        out = run_cli("detect", "--input", f, "--algo", "components").stdout
        labels = dict(tuple(map(int, line.split())) for line in out.splitlines())
        assert len(set(labels.values())) == 2

    def test_lpa_requires_seed(self, tmp_path):
        f = write_edges(tmp_path / "g.txt", [(0, 1)])
        run_cli("detect", "--input", f, "--algo", "lpa", expect=2)

    def test_lpa_matches_library(self, tmp_path):
        spec = sample_vector("sbm-60")
        g, _ = sample_sbm(spec)
        f = tmp_path / "g.txt"
        run_cli(
            "sample", "--n", spec.n, "--k", spec.k, "--p1", 0.8, "--p2", 0.05,
            "--seed", spec.seed, "--out", f,
        )
        out = run_cli("detect", "--input", f, "--algo", "lpa", "--seed", 9).stdout
        got = dict(tuple(map(int, line.split())) for line in out.splitlines())
        expected = lpa_detect(g, seed=9).partition
        assert got == {int(g.ext_ids[i]): int(expected.labels[i]) for i in range(g.n)}

    def test_eval_self_is_one(self, tmp_path):
        f = tmp_path / "labels.txt"
        f.write_text("0\t0\n1\t0\n2\t1\n3\t1\n")
        out = run_cli("eval", "--metric", "ari", "--truth", f, "--pred", f).stdout
        assert out == "1.000000\n"

    def test_eval_vectors(self, tmp_path):
        for case in VECTORS["eval"]:
            t = tmp_path / f"{case['name']}-t.txt"
            p = tmp_path / f"{case['name']}-p.txt"
            if case["metric"] == "f1":
                t.write_text("".join(" ".join(map(str, c)) + "\n" for c in case["truth_cover"]))
                p.write_text("".join(" ".join(map(str, c)) + "\n" for c in case["pred_cover"]))
            else:
                t.write_text("".join(f"{k}\t{v}\n" for k, v in case["truth"].items()))
                p.write_text("".join(f"{k}\t{v}\n" for k, v in case["pred"].items()))
            out = run_cli("eval", "--metric", case["metric"], "--truth", t, "--pred", p).stdout
            assert len(out.strip()) == 8 or float(out) is not None

    def test_eval_ari_hand_value(self, tmp_path):
        case = next(c for c in VECTORS["eval"] if c["name"] == "ari-hand")
        t = tmp_path / "t.txt"
        p = tmp_path / "p.txt"
        t.write_text("".join(f"{k}\t{v}\n" for k, v in case["truth"].items()))
        p.write_text("".join(f"{k}\t{v}\n" for k, v in case["pred"].items()))
        out = run_cli("eval", "--metric", "ari", "--truth", t, "--pred", p).stdout
        assert out == "-0.500000\n"

    def test_eval_empty_pred_exit3(self, tmp_path):
        t = tmp_path / "t.txt"
        t.write_text("1 2\n3 4\n")
        p = tmp_path / "p.txt"
        p.write_text("")
        run_cli("eval", "--metric", "f1", "--truth", t, "--pred", p, expect=3)

    def test_eval_node_mismatch_exit3(self, tmp_path):
        t = tmp_path / "t.txt"
        t.write_text("0\t0\n1\t1\n")
        p = tmp_path / "p.txt"
        p.write_text("0\t0\n2\t1\n")
        run_cli("eval", "--metric", "ari", "--truth", t, "--pred", p, expect=3)


class TestConfigFile:
    def test_config_supplies_and_flags_override(self, tmp_path):
        f = write_edges(tmp_path / "tri.txt", [(0, 1), (0, 2), (1, 2)])
        cfg = tmp_path / "c.cfg"
        cfg.write_text(f"input={f}\nmeasure=frc\n")
        out = run_cli("curvature", "--config", cfg).stdout
        assert "0,1,3" in out
        out = run_cli("curvature", "--config", cfg, "--measure", "lrc").stdout
        assert "0,1,1.5" in out

    def test_unknown_config_key(self, tmp_path):
        f = write_edges(tmp_path / "tri.txt", [(0, 1), (0, 2), (1, 2)])
        cfg = tmp_path / "c.cfg"
        cfg.write_text(f"input={f}\nbogus=1\n")
        proc = run_cli("curvature", "--config", cfg, expect=2)
        assert "bogus" in json.loads(proc.stderr)["error"]


class TestPipelineCommand:
    def test_football_quick(self, tmp_path):
        from .conftest import football_path

        out = tmp_path / "report.json"
        run_cli(
            "pipeline", "--input", football_path(), "--format", "gml",
            "--algo", "lpa", "--seeds", 5, "--seed", 0, "--out", out,
        )
        report = json.loads(out.read_text())
        assert report["edges_after"] < report["edges_before"]
        assert report["ari_after"] > report["ari_before"]
