import pytest

from pcmmap import cli, random_circuit
from pcmmap.fileio import parse_instance, serialize_circuit, write_circuit
from pcmmap.fixtures import one_var_nondet, two_var_mixture


@pytest.fixture
def files(tmp_path):
    circuit = tmp_path / "mix.pc"
    write_circuit(two_var_mixture(), circuit)
    instance = tmp_path / "mix.inst"
    instance.write_text("q 0 1\n")
    return circuit, instance


class TestCheck:
    def test_valid_circuit(self, files, capsys):
        circuit, _ = files
        assert cli.main(["check", "--circuit", str(circuit)]) == 0
        out = capsys.readouterr().out
        assert "nodes: 9" in out and "edges: 10" in out
        assert "smooth: yes" in out and "decomposable: yes" in out

    def test_malformed_circuit_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.pc"
        bad.write_text("pc 2\nl 0 9 1\nr 0\n")
        assert cli.main(["check", "--circuit", str(bad)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_missing_file_exits_1(self, tmp_path, capsys):
        assert cli.main(["check", "--circuit", str(tmp_path / "nope.pc")]) == 1


class TestSolve:
    def test_solve_reports_value_and_state(self, files, capsys):
        circuit, instance = files
        assert cli.main(["solve", "--circuit", str(circuit), "--instance", str(instance)]) == 0
        out = capsys.readouterr().out
        assert "status: solved" in out
        assert "value: 0.42" in out
        assert "state: 0=1 1=1" in out

    def test_heuristic_flag(self, files, capsys):
        circuit, instance = files
        for h in ("pruned", "ub"):
            assert (
                cli.main(
                    ["solve", "--circuit", str(circuit), "--instance", str(instance), "--heuristic", h]
                )
                == 0
            )
        capsys.readouterr()

    def test_bad_heuristic_exits_1(self, files, capsys):
        circuit, instance = files
        with pytest.raises(SystemExit) as exc:
            cli.main(
                ["solve", "--circuit", str(circuit), "--instance", str(instance), "--heuristic", "x"]
            )
        assert exc.value.code == 1
        capsys.readouterr()

    def test_trace_file(self, tmp_path, capsys):
        circuit = tmp_path / "f2.pc"
        write_circuit(one_var_nondet(), circuit)
        instance = tmp_path / "f2.inst"
        instance.write_text("q 0\n")
        trace = tmp_path / "trace.txt"
        assert (
            cli.main(
                [
                    "solve",
                    "--circuit",
                    str(circuit),
                    "--instance",
                    str(instance),
                    "--trace",
                    str(trace),
                ]
            )
            == 0
        )
        lines = trace.read_text().splitlines()
        assert lines[0].startswith("iter=0 u=") and lines[-1].startswith("iter=1 ")
        capsys.readouterr()

    def test_timeout_exits_2(self, tmp_path, capsys):
        circuit = tmp_path / "big.pc"
        write_circuit(random_circuit(12, 0), circuit)
        instance = tmp_path / "big.inst"
        instance.write_text("q " + " ".join(map(str, range(11))) + "\n")
        code = cli.main(
            [
                "solve",
                "--circuit",
                str(circuit),
                "--instance",
                str(instance),
                "--timeout",
                "1e-9",
            ]
        )
        assert code == 2
        assert "status: timeout" in capsys.readouterr().out


class TestBoundAndOracle:
    def test_bound_brackets_oracle(self, files, capsys):
        circuit, instance = files
        assert cli.main(["bound", "--circuit", str(circuit), "--instance", str(instance)]) == 0
        bound_out = capsys.readouterr().out
        assert cli.main(["oracle", "--circuit", str(circuit), "--instance", str(instance)]) == 0
        oracle_out = capsys.readouterr().out
        fields = dict(line.split(": ", 1) for line in bound_out.strip().splitlines())
        value = float(dict(line.split(": ", 1) for line in oracle_out.strip().splitlines())["value"])
        assert float(fields["lower"]) <= value <= float(fields["upper"]) + 1e-12

    def test_oracle_budget_exits_1(self, files, capsys):
        circuit, instance = files
        code = cli.main(
            ["oracle", "--circuit", str(circuit), "--instance", str(instance), "--budget", "2"]
        )
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestGen:
    def test_file_naming_and_content(self, tmp_path, capsys):
        circuit = tmp_path / "rc.pc"
        write_circuit(random_circuit(10, 4), circuit)
        out = tmp_path / "insts"
        code = cli.main(
            [
                "gen",
                "--circuit",
                str(circuit),
                "--proportions",
                "30,30,40",
                "--count",
                "3",
                "--seed",
                "5",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["rc.30-30-40.5.inst", "rc.30-30-40.6.inst", "rc.30-30-40.7.inst"]
        inst = parse_instance(out / names[0])
        assert len(inst.evidence) == 3 and len(inst.query) == 3
        capsys.readouterr()

    def test_bad_proportions_exit_1(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(
                [
                    "gen",
                    "--circuit",
                    "x.pc",
                    "--proportions",
                    "30,30",
                    "--out",
                    str(tmp_path),
                ]
            )
        assert exc.value.code == 1
        capsys.readouterr()


class TestBench:
    def test_table_and_csv(self, tmp_path, capsys):
        cdir = tmp_path / "circuits"
        cdir.mkdir()
        for seed in (0, 1):
            write_circuit(random_circuit(6, seed), cdir / f"c{seed}.pc")
        (cdir / "broken.pc").write_text("pc 2\nnot a circuit\n")
        csv_out = tmp_path / "results.csv"
        code = cli.main(
            [
                "bench",
                "--circuits",
                str(cdir),
                "--proportions",
                "50,20,30",
                "40,20,40",
                "--count",
                "2",
                "--out",
                str(csv_out),
            ]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert "skipping" in captured.err and "broken.pc" in captured.err
        assert "c0.pc" in captured.out and "c1.pc" in captured.out
        rows = csv_out.read_text().strip().splitlines()
        assert rows[0].startswith("circuit,q,e,h,seed,status")
        assert len(rows) == 1 + 2 * 2 * 2  # 2 circuits x 2 proportions x 2 seeds
        assert all("solved" in r for r in rows[1:])


class TestUsage:
    def test_no_command_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 1
        capsys.readouterr()

    def test_entry_point_installed(self):
        import shutil

        exe = shutil.which("pcmmap")
        if exe is None:
            pytest.skip("console script not on PATH")
        import subprocess

        proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "solve" in proc.stdout
