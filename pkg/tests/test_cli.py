from click.testing import CliRunner

from toricfiber import data
from toricfiber.cli import cli, pipeline_report_lines
from toricfiber.documents import fan_document, serialize


def run(*args):
    return CliRunner().invoke(cli, args, catch_exceptions=False)


def test_fan_check():
    res = run("fan", "check", "--format", "structured")
    assert res.exit_code == 0
    assert "maximal_cones: 54" in res.output
    assert "complete: True" in res.output


def test_fan_smooth_and_singular():
    assert "False" in run("fan", "smooth").output
    out = run("fan", "singular").output
    assert "v5'.b'" in out and "v4'.e1'.e2'" in out


def test_morphism_commands():
    out = run("morphism", "check", "--format", "structured").output
    assert "map_of_fans: True" in out and "degree: 1" in out
    out = run("morphism", "image", "--format", "structured").output
    assert "equals_target: True" in out
    out = run("morphism", "fibers", "--sigma", "r1",
              "--format", "structured").output
    assert "index: 1" in out
    assert "X(5)" in out and "WCP2(1,1,3)" in out and "F2" in out
    out = run("morphism", "fibration", "--format", "structured").output
    assert "fibration: True" in out
    out = run("morphism", "stratify", "--format", "structured").output
    assert out.count("Ind=1") == 33


def test_polytope_commands():
    out = run("polytope", "points", "--format", "structured").output
    assert "count: 3365" in out
    out = run("polytope", "facets", "--format", "structured").output
    assert "facets: 9" in out
    out = run("polytope", "reflexive").output
    assert "True" in out
    out = run("polytope", "dual").output
    assert out.count("vertex") == 9
    out = run("polytope", "restrict", "--tau", "v1',e2'",
              "--format", "structured").output
    assert "count: 11" in out
    out = run("polytope", "project", "--tau", "v1',e2'", "--sigma", "d4,r1",
              "--format", "structured").output
    assert "count: 5" in out and "component: WCP2(1,1,3)" in out


def test_bundle_commands():
    out = run("bundle", "sections", "--format", "structured").output
    assert "sections: 3365" in out
    out = run("bundle", "restrict", "--tau", "c1'",
              "--format", "structured").output
    assert "surviving_terms: 154" in out
    out = run("bundle", "fibred", "--tau", "v1',e2'", "--sigma", "d4,r1",
              "--format", "structured").output
    assert "groups: 5" in out
    out = run("bundle", "homogeneous", "--format", "structured").output
    assert "monomials: 3365" in out


def test_analysis_commands():
    out = run("analysis", "discriminant", "--shape", "F2",
              "--coeffs", "0,-1,0,1", "--format", "structured").output
    assert "value: -4" in out
    out = run("analysis", "intersections", "--surface", "WCP2(1,2,3)",
              "--format", "structured").output
    assert "K_squared: 6" in out
    out = run("analysis", "genus", "--surface", "WCP2(1,2,3)",
              "--curve", "1,1,1", "--format", "structured").output
    assert "genus: 1" in out
    out = run("analysis", "moduli", "--format", "structured").output
    assert "moduli_dimension: 2897" in out
    out = run("analysis", "resolve", "--format", "structured").output
    assert "smooth: True" in out


def test_unknown_ray_name_is_usage_error():
    res = CliRunner().invoke(cli, ["morphism", "fibers", "--sigma", "zz"])
    assert res.exit_code != 0


def test_input_document_flow(tmp_path):
    doc = serialize(fan_document(data.base_fan(), data.base_ray_names()))
    path = tmp_path / "base.fan"
    path.write_text(doc)
    out = run("fan", "check", "--input", str(path),
              "--format", "structured").output
    assert "cones_total: 33" in out


def test_invalid_document_fails(tmp_path):
    path = tmp_path / "bad.fan"
    path.write_text("toricfiber fan v1\nrank 2\nray a 2 4\ncone a\n")
    res = CliRunner().invoke(cli, ["fan", "check", "--input", str(path)])
    assert res.exit_code != 0


def test_pipeline_report_deterministic():
    first = pipeline_report_lines()
    second = pipeline_report_lines()
    assert first == second
    joined = "\n".join(first)
    assert "nonzero primitive cones: 59" in joined
    assert "moduli dimension: 2897" in joined
    assert "smooth: True" in joined
