import json

import pytest

import foamlab as fl
from foamlab.cli import run


def read(path):
    return path.read_text()


class TestNewAndCheck:
    def test_double_round_trip(self, tmp_path, capsys):
        out = tmp_path / "db.json"
        assert run(["new", "double", "--r1", "1", "--r2", "0.5", "-o", str(out)]) == 0
        assert run(["check", str(out)]) == 0
        assert "Equilibrium" in capsys.readouterr().out

    def test_missing_input_is_exit_2(self, tmp_path):
        assert run(["check", str(tmp_path / "missing.json")]) == 2

    def test_corrupt_input_is_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert run(["check", str(bad)]) == 2

    def test_quasi_check_fails(self, tmp_path):
        out = tmp_path / "q.json"
        assert run(["new", "quasi", "--kind", "four_stretched", "-o", str(out)]) == 0
        assert run(["check", str(out)]) == 1

    def test_output_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(["new", "flower", "-o", str(a)])
        run(["new", "flower", "-o", str(b)])
        assert read(a) == read(b)


class TestNumericVerbs:
    def test_pressures(self, tmp_path, capsys):
        out = tmp_path / "db.json"
        run(["new", "double", "--r1", "1", "--r2", "0.5", "-o", str(out)])
        assert run(["pressures", str(out)]) == 0
        p = json.loads(capsys.readouterr().out)
        assert p == pytest.approx([0.0, 1.0, 2.0], abs=1e-9)

    def test_dim(self, tmp_path, capsys):
        out = tmp_path / "n.json"
        run(["new", "necklace", "--k", "7", "-o", str(out)])
        assert run(["dim", str(out), "--fix-areas"]) == 0
        assert "nullity: 4" in capsys.readouterr().out

    def test_stability(self, tmp_path, capsys):
        out = tmp_path / "db.json"
        run(["new", "double", "-o", str(out)])
        assert run(["stability", str(out), "--m", "32"]) == 0
        assert "StrictlyStable" in capsys.readouterr().out

    def test_solve(self, tmp_path):
        src, dst = tmp_path / "t.json", tmp_path / "ts.json"
        run(["new", "triple", "-o", str(src)])
        assert run(["solve", str(src), "--areas", "1.1,0.9,1.0", "-o", str(dst)]) == 0
        c = fl.loads(read(dst))
        assert fl.region_areas(c) == pytest.approx([1.1, 0.9, 1.0], abs=1e-8)

    def test_solve_bad_area_count_is_exit_2(self, tmp_path):
        src = tmp_path / "t.json"
        run(["new", "triple", "-o", str(src)])
        assert run(["solve", str(src), "--areas", "1.0"]) == 2

    def test_continue(self, tmp_path):
        src, dst = tmp_path / "t.json", tmp_path / "tc.json"
        run(["new", "triple", "-o", str(src)])
        assert (
            run(
                ["continue", str(src), "--areas", "1.2,0.8,1.0", "--steps", "5",
                 "-o", str(dst)]
            )
            == 0
        )
        c = fl.loads(read(dst))
        assert fl.region_areas(c) == pytest.approx([1.2, 0.8, 1.0], abs=1e-8)


class TestSurgeryVerbs:
    def test_decorate_and_shrink(self, tmp_path):
        t, t4, t3 = (tmp_path / f for f in ("t.json", "t4.json", "t3.json"))
        run(["new", "triple", "-o", str(t)])
        assert run(
            ["decorate", str(t), "--vertex", "0", "--size", "0.25", "-o", str(t4)]
        ) == 0
        assert fl.loads(read(t4)).n == 4
        assert run(
            ["shrink", str(t4), "--region", "4", "--factor", "0", "-o", str(t3)]
        ) == 0
        assert fl.loads(read(t3)).n == 3

    def test_bad_vertex_is_exit_2(self, tmp_path):
        t = tmp_path / "t.json"
        run(["new", "triple", "-o", str(t)])
        assert run(["decorate", str(t), "--vertex", "99", "--size", "0.2"]) == 2


class TestMapVerbs:
    def test_mobius_random_requires_seed(self, tmp_path):
        t = tmp_path / "t.json"
        run(["new", "triple", "-o", str(t)])
        assert run(["mobius", str(t), "--random"]) == 2

    def test_mobius_random_preserves_equilibrium(self, tmp_path):
        t, out = tmp_path / "t.json", tmp_path / "out.json"
        run(["new", "triple", "-o", str(t)])
        assert run(
            ["mobius", str(t), "--random", "--seed", "3", "-o", str(out)]
        ) == 0
        assert run(["check", str(out)]) == 0

    def test_mobius_seeded_deterministic(self, tmp_path):
        t, a, b = (tmp_path / f for f in ("t.json", "a.json", "b.json"))
        run(["new", "triple", "-o", str(t)])
        run(["mobius", str(t), "--random", "--seed", "9", "-o", str(a)])
        run(["mobius", str(t), "--random", "--seed", "9", "-o", str(b)])
        assert read(a) == read(b)

    def test_translate(self, tmp_path):
        t, out = tmp_path / "t.json", tmp_path / "out.json"
        run(["new", "double", "-o", str(t)])
        assert run(["mobius", str(t), "--translate", "1,2", "-o", str(out)]) == 0
        a = fl.loads(read(t)).vertices[0]
        b = fl.loads(read(out)).vertices[0]
        assert abs(b.z - a.z - (1 + 2j)) < 1e-12


class TestReportVerbs:
    def test_desitter_verify(self, tmp_path, capsys):
        t = tmp_path / "t.json"
        run(["new", "triple", "-o", str(t)])
        assert run(["desitter", "verify", str(t)]) == 0
        assert json.loads(capsys.readouterr().out)["passed"] is True

    def test_desitter_verify_quasi_fails(self, tmp_path, capsys):
        q = tmp_path / "q.json"
        run(["new", "quasi", "-o", str(q)])
        assert run(["desitter", "verify", str(q)]) == 1

    def test_render(self, tmp_path):
        t, svg = tmp_path / "t.json", tmp_path / "t.svg"
        run(["new", "four", "-o", str(t)])
        assert run(["render", str(t), "-o", str(svg)]) == 0
        assert read(svg).startswith("<svg")

    def test_tol_profile_flag(self, tmp_path):
        t = tmp_path / "t.json"
        run(["new", "double", "-o", str(t)])
        assert run(["--tol-profile", "loose", "check", str(t)]) == 0
