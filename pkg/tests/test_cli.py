import json

from genlab import census
from genlab.cli import run


def read(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return fh.read()


class TestCensusCommand:
    def test_summary_matches_library(self, tmp_path, capsys):
        assert run(["census", "--k", "40", "--emit", "summary"]) == 0
        out = capsys.readouterr().out
        rec = census.census(40)
        assert f"total = {rec.total}" in out
        assert f"= {rec.parabolic}" in out

    def test_csv_row(self, tmp_path):
        out = tmp_path / "c.csv"
        assert run(["census", "--k", "25", "--emit", "csv", "--out", str(out)]) == 0
        lines = read(out).split("\r\n")
        assert lines[0].startswith("# genlab schema_version=1 config=")
        assert lines[1] == "k,total,parabolic,ratio"
        rec = census.census(25)
        assert lines[2] == f"25,{rec.total},{rec.parabolic},{rec.parabolic_ratio.numerator}/{rec.parabolic_ratio.denominator}"

    def test_budget_exit_code(self, tmp_path, capsys):
        out = tmp_path / "never.csv"
        assert run(["census", "--k", "5000", "--emit", "csv", "--out", str(out)]) == 3
        assert not out.exists()


class TestValidation:
    def test_malformed_flag(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        code = run(["census", "--k", "10", "--bogus", "1", "--out", str(out)])
        assert code == 2
        assert not out.exists()

    def test_unknown_subcommand(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_semantic_validation(self, capsys):
        assert run(["census", "--k", "0"]) == 2
        assert run(["quotient", "--p", "4", "--kmax", "3"]) == 2


class TestQuotientCommand:
    def test_csv_rows_positive_tv(self, tmp_path):
        out = tmp_path / "q.csv"
        assert run(["quotient", "--p", "5", "--kmax", "10", "--emit", "csv",
                    "--out", str(out)]) == 0
        lines = [l for l in read(out).split("\r\n") if l]
        assert lines[1] == "k,tv"
        rows = [l.split(",") for l in lines[2:]]
        assert len(rows) == 10
        for k, tv in rows:
            num, den = tv.split("/")
            assert int(num) > 0 and int(den) > 0


class TestReplay:
    def test_census_csv_replay_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(["census", "--k", "30", "--emit", "csv", "--out", str(a)]) == 0
        assert run(["replay", str(a), "--out", str(b)]) == 0
        assert read(a) == read(b)

    def test_seeded_samples_replay_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["sample", "--norm", "6", "--count", "80", "--slack", "1.0",
                    "--seed", "42", "--emit", "matrices", "--out", str(a)]) == 0
        assert run(["replay", str(a), "--out", str(b)]) == 0
        assert read(a) == read(b)

    def test_replay_across_worker_counts(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        monkeypatch.setenv("GENLAB_THREADS", "1")
        assert run(["census", "--k", "35", "--emit", "csv", "--out", str(a)]) == 0
        monkeypatch.setenv("GENLAB_THREADS", "8")
        assert run(["replay", str(a), "--out", str(b)]) == 0
        assert read(a) == read(b)

    def test_schema_mismatch_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"schema_version": 99, "config": {}}))
        assert run(["replay", str(bad)]) == 2

    def test_unknown_config_field_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "schema_version": 1,
            "config": {"subcommand": "census", "k": 5, "emit": "csv", "zzz": 1}}))
        assert run(["replay", str(bad)]) == 2


class TestSieveCommand:
    def test_json_certificate(self, tmp_path):
        mat = tmp_path / "m.json"
        mat.write_text("[[0,-1],[1,0]]")
        out = tmp_path / "cert.json"
        assert run(["sieve", "--matrix", str(mat), "--emit", "json",
                    "--out", str(out)]) == 0
        record = json.loads(read(out))
        assert record["schema_version"] == 1
        res = record["results"]
        assert res["casson"]["verdict"] == "rejected"
        assert res["irreducibility"]["status"] == "irreducible"
        assert res["irreducibility"]["witness_prime"] is not None
        assert res["galois"]["verdict"] == "full_symmetric"
        assert res["galois"]["witnesses"]

    def test_companion_certified(self, tmp_path):
        mat = tmp_path / "m.json"
        mat.write_text("[[0,0,1],[1,0,1],[0,1,0]]")  # companion of x^3 - x - 1
        out = tmp_path / "cert.json"
        assert run(["sieve", "--matrix", str(mat), "--budget", "100",
                    "--emit", "json", "--out", str(out)]) == 0
        res = json.loads(read(out))["results"]
        assert res["casson"]["verdict"] == "certified"


class TestZariskiCommand:
    def test_json_verdict(self, tmp_path):
        gens = tmp_path / "g.json"
        gens.write_text("[[[1,0],[1,1]],[[1,1],[0,1]]]")
        out = tmp_path / "z.json"
        assert run(["zariski", "--gens", str(gens), "--p", "5", "--emit", "json",
                    "--out", str(out)]) == 0
        res = json.loads(read(out))["results"]
        assert res["verdict"] == "dense_certified_modp"
        assert res["lie_dimension"] == 3
        assert res["modp"] == [{"p": 5, "surjective": True, "order": 120}]

    def test_rejects_small_prime(self, tmp_path, capsys):
        gens = tmp_path / "g.json"
        gens.write_text("[[[1,0],[1,1]]]")
        assert run(["zariski", "--gens", str(gens), "--p", "3"]) == 2


class TestWalkCommand:
    def test_graph_file_round_trip(self, tmp_path):
        from genlab.walks import build_free_group_graph

        gfile = tmp_path / "graph.json"
        gfile.write_text(build_free_group_graph(2).to_json())
        out = tmp_path / "w.csv"
        assert run(["walk", "--graph", str(gfile), "--len", "6", "--samples", "4",
                    "--seed", "9", "--emit", "csv", "--out", str(out)]) == 0
        lines = [l for l in read(out).split("\r\n") if l]
        assert len(lines) == 2 + 4
        inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
        for line in lines[2:]:
            word = line.split(",")[1].split(" ")
            assert len(word) == 6
            for s, t in zip(word, word[1:]):
                assert t != inv[s]

    def test_builtin_freeproduct(self, capsys):
        assert run(["walk", "--graph", "builtin:freeproduct-2-3-improved",
                    "--len", "4", "--samples", "2", "--seed", "0",
                    "--emit", "summary"]) == 0
        out = capsys.readouterr().out
        assert "property R: holds" in out


class TestDensityCommand:
    def test_csv_columns(self, tmp_path):
        out = tmp_path / "d.csv"
        assert run(["density", "--experiment", "visible-square", "--tmax", "20",
                    "--emit", "csv", "--out", str(out)]) == 0
        lines = [l for l in read(out).split("\r\n") if l]
        assert lines[1] == "k,hits,total,ratio,rho_k"
        assert len(lines) == 2 + 20
        first = lines[2].split(",")
        assert first[:4] == ["1", "1", "1", "1/1"]

    def test_f2_experiment(self, tmp_path):
        out = tmp_path / "f.csv"
        assert run(["density", "--experiment", "f2", "--tmax", "6",
                    "--emit", "csv", "--out", str(out)]) == 0
        lines = [l for l in read(out).split("\r\n") if l]
        row2 = lines[3].split(",")
        assert row2[:3] == ["2", "12", "16"]  # cumulative over the first two shells


class TestPlots:
    def test_quotient_plot_written(self, tmp_path):
        out = tmp_path / "q.csv"
        png = tmp_path / "q.png"
        assert run(["quotient", "--p", "5", "--kmax", "6", "--emit", "csv",
                    "--out", str(out), "--plot", str(png)]) == 0
        assert png.exists() and png.stat().st_size > 1000

    def test_density_plot_written(self, tmp_path):
        png = tmp_path / "d.png"
        out = tmp_path / "d.csv"
        assert run(["density", "--experiment", "visible-square", "--tmax", "15",
                    "--emit", "csv", "--out", str(out), "--plot", str(png)]) == 0
        assert png.exists() and png.stat().st_size > 1000


class TestMoreEmitPaths:
    def test_walk_json(self, tmp_path):
        out = tmp_path / "w.json"
        assert run(["walk", "--graph", "builtin:freegroup", "--len", "5",
                    "--samples", "3", "--seed", "2", "--emit", "json",
                    "--out", str(out)]) == 0
        rec = json.loads(read(out))
        assert rec["results"]["property_R"] == "holds"
        assert len(rec["results"]["words"]) == 3

    def test_visible_disk(self, tmp_path):
        out = tmp_path / "d.csv"
        assert run(["density", "--experiment", "visible-disk", "--tmax", "8",
                    "--emit", "csv", "--out", str(out)]) == 0
        lines = [l for l in read(out).split("\r\n") if l]
        assert lines[2].split(",")[:3] == ["1", "4", "4"]

    def test_census_plot(self, tmp_path):
        png = tmp_path / "c.png"
        assert run(["census", "--k", "12", "--emit", "summary",
                    "--out", str(tmp_path / "c.txt"), "--plot", str(png)]) == 0
        assert png.exists() and png.stat().st_size > 1000

    def test_sample_report_plot(self, tmp_path):
        png = tmp_path / "s.png"
        out = tmp_path / "s.json"
        assert run(["sample", "--norm", "6", "--count", "400", "--slack", "1.0",
                    "--seed", "5", "--emit", "report", "--out", str(out),
                    "--plot", str(png)]) == 0
        assert png.exists() and png.stat().st_size > 1000

    def test_summary_replay_identical(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert run(["census", "--k", "18", "--emit", "summary", "--out", str(a)]) == 0
        assert run(["replay", str(a), "--out", str(b)]) == 0
        assert read(a) == read(b)


class TestThreadsEnv:
    def test_bad_thread_count(self, monkeypatch, capsys):
        monkeypatch.setenv("GENLAB_THREADS", "zero")
        assert run(["census", "--k", "10"]) == 2

    def test_workers_do_not_change_output(self, tmp_path, monkeypatch):
        outs = []
        for threads in ("1", "8"):
            monkeypatch.setenv("GENLAB_THREADS", threads)
            out = tmp_path / f"c{threads}.csv"
            assert run(["census", "--k", "45", "--emit", "csv",
                        "--out", str(out)]) == 0
            outs.append(read(out))
        assert outs[0] == outs[1]
