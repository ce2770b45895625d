import json
import subprocess
import sys

import pytest

from contact_cwc.cli import InputError, main, read_trajectory

PATCH = ["--X", "1", "--Y", "1", "--mu", "0.5"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def machine_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def write_csv(tmp_path, rows, header="t,fx,fy,fz,taux,tauy,tauz"):
    path = tmp_path / "traj.csv"
    path.write_text("\n".join([header] + rows) + "\n")
    return str(path)


class TestCheck:
    def test_member(self, capsys):
        code, out, _ = run(capsys, "check", *PATCH, "--wrench", "0,0,10,0,0,0")
        assert code == 0 and "MEMBER" in out

    def test_yaw_violation(self, capsys):
        code, out, _ = run(capsys, "check", *PATCH, "--wrench", "0,0,10,0,0,10.01", "--format", "machine")
        record = machine_lines(out)[0]
        assert code == 1 and record["member"] is False and record["schema_version"] == 1
        assert record["violated"] and all(v.startswith("W6") for v in record["violated"])

    @pytest.mark.parametrize("wrench", ["0,0,10,0,0", "a,b,c,d,e,f", "0,0,nan,0,0,0"])
    def test_malformed(self, capsys, wrench):
        with pytest.raises(SystemExit) as exc:
            main(["check", *PATCH, "--wrench", wrench])
        assert exc.value.code == 2

    def test_bad_patch(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check", "--X", "-1", "--Y", "1", "--mu", "0.5", "--wrench", "0,0,1,0,0,0"])
        assert exc.value.code == 2


class TestCone:
    def test_face_rows(self, capsys):
        code, out, _ = run(capsys, "cone", *PATCH, "--format", "machine")
        rows = machine_lines(out)
        assert code == 0 and len(rows) == 16 and rows[0]["label"] == "W1:+fx"

    def test_span_rays(self, capsys):
        _, out, _ = run(capsys, "cone", *PATCH, "--form", "span", "--format", "machine")
        assert len(machine_lines(out)) == 16

    def test_exact(self, capsys):
        code, out, _ = run(capsys, "cone", *PATCH, "--exact")
        assert code == 0 and "MATCH" in out and "MISMATCH" not in out

    def test_frictionless(self, capsys):
        code, out, err = run(capsys, "cone", "--X", "1", "--Y", "1", "--mu", "0", "--format", "machine")
        assert code == 0 and "ZeroFriction" in err and len(machine_lines(out)) == 10


class TestReconstruct:
    def test_symmetric(self, capsys):
        code, out, _ = run(capsys, "reconstruct", *PATCH, "--wrench", "0,0,4,0,0,0", "--format", "machine")
        rec = machine_lines(out)[0]
        assert code == 0 and rec["forces"] == [[0, 0, 1]] * 4

    def test_infeasible(self, capsys):
        code, out, _ = run(capsys, "reconstruct", *PATCH, "--wrench", "0,0,10,0,0,10.01")
        assert code == 1 and "INFEASIBLE" in out


class TestTrajectory:
    def test_all_members(self, capsys, tmp_path):
        path = write_csv(tmp_path, ["0,0,0,10,0,0,0", "0.1,1,0,10,0.5,0.2,1"])
        code, out, _ = run(capsys, "trajectory", *PATCH, "--input", path, "--format", "machine")
        lines = machine_lines(out)
        assert code == 0 and lines[-1]["violations"] == 0 and lines[-1]["records"] == 2

    def test_flags_yaw(self, capsys, tmp_path):
        path = write_csv(tmp_path, ["0,0,0,10,0,0,0", "1,0,0,10,0,0,10.01", "2,0,0,10,0,0,1"])
        code, out, _ = run(capsys, "trajectory", *PATCH, "--input", path, "--format", "machine")
        lines = machine_lines(out)
        assert code == 1
        bad = [r for r in lines if r["kind"] == "record" and not r["member"]]
        assert len(bad) == 1 and bad[0]["t"] == 1 and bad[0]["violated"][0].startswith("W6")
        assert lines[-1]["worst_t"] == 1

    def test_scaled_area_shrinks(self, capsys, tmp_path):
        rows = [f"{k},0.5,0.3,10,{0.6 * k},{-0.5 * k},{0.2 * k}" for k in range(15)]
        path = write_csv(tmp_path, rows)
        _, out, _ = run(capsys, "trajectory", *PATCH, "--input", path, "--scale-area", "0.45",
                        "--format", "machine")
        records = [r for r in machine_lines(out) if r["kind"] == "record"]
        assert all(r["scaled_min_margin"] <= r["min_margin"] + 1e-12 for r in records)
        assert all(r["member"] for r in records if r["scaled_member"])
        assert sum(r["member"] for r in records) > sum(r["scaled_member"] for r in records)

    def test_strict_stops_at_bad_line(self, capsys, tmp_path):
        path = write_csv(tmp_path, ["0,0,0,10,0,0,0", "1,0,0,x,0,0,0", "2,0,0,10,0,0,0"])
        code, _, err = run(capsys, "trajectory", *PATCH, "--input", path)
        assert code == 2 and "line 3" in err

    def test_lenient_skips(self, capsys, tmp_path):
        path = write_csv(tmp_path, ["0,0,0,10,0,0,0", "1,0,0,x,0,0,0", "0,0,0,10,0,0,0",
                                    "2,0,0,10,0,0,0"])
        code, out, err = run(capsys, "trajectory", *PATCH, "--input", path, "--lenient",
                             "--format", "machine")
        assert code == 0 and machine_lines(out)[-1]["records"] == 2
        assert "line 3" in err and "line 4" in err

    def test_bad_header(self, capsys, tmp_path):
        path = write_csv(tmp_path, ["0,0,0,10,0,0,0"], header="time,a,b,c,d,e,f")
        code, _, err = run(capsys, "trajectory", *PATCH, "--input", path)
        assert code == 2 and "header" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "trajectory", *PATCH, "--input", str(tmp_path / "none.csv"))
        assert code == 2

    def test_reader_timestamps(self):
        with pytest.raises(InputError) as exc:
            read_trajectory(["t,fx,fy,fz,taux,tauy,tauz", "1,0,0,1,0,0,0", "1,0,0,1,0,0,0"])
        assert exc.value.line == 3


class TestValidate:
    ARGS = ["validate", "--X", "0.1,0.3", "--Y", "0.05", "--mu", "0.5", "--samples", "400",
            "--reconstruct-samples", "50", "--format", "machine"]

    def test_pass_and_deterministic(self, capsys):
        code, first, _ = run(capsys, *self.ARGS)
        _, second, _ = run(capsys, *self.ARGS)
        assert code == 0 and first == second
        summary = machine_lines(first)[-1]
        assert summary["patches"] == 2 and summary["disagreements"] == 0

    def test_bad_grid(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["validate", "--X", "0.1,abc"])
        assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "contact_cwc", "check", *PATCH, "--wrench",
                          "0,0,10,0,0,0"], capture_output=True, text=True)
    assert res.returncode == 0 and "MEMBER" in res.stdout
