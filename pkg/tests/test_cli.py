import pytest

from netbisim.cli import cli_main

FIG1 = """\
net fig1
places s1 s2 s3
trans t1 a : s1 -> s2
trans t4 a : s3 -> 0
marking m_s1 : s1
marking m_s3 : s3
"""

FIG2 = """\
net fig2
places s1 s2 s3
trans t1 u : s1 -> 2*s2
trans t2 v : s2 -> s3
marking m0 : s1 + 3*s2
"""

CYCLE = """\
net cycle
places a b
trans t1 x : 2*a -> b
trans t2 y : b -> 2*a
marking m : 2*a
"""


@pytest.fixture
def fig1_path(tmp_path):
    path = tmp_path / "fig1.pn"
    path.write_text(FIG1)
    return str(path)


@pytest.fixture
def fig2_path(tmp_path):
    path = tmp_path / "fig2.pn"
    path.write_text(FIG2)
    return str(path)


def test_check_fc_exit_0(fig1_path, capsys):
    assert cli_main(["check", "--equiv", "fc", "--cap", "4",
                     fig1_path, "m_s1", "m_s3"]) == 0
    assert capsys.readouterr().out.strip() == "equivalent"


def test_check_cn_exit_1(fig1_path, capsys):
    assert cli_main(["check", "--equiv", "cn", "--cap", "4",
                     fig1_path, "m_s1", "m_s3"]) == 1
    assert capsys.readouterr().out.strip() == "not-equivalent"


def test_check_il(fig1_path):
    assert cli_main(["check", "--equiv", "il", "--cap", "4",
                     fig1_path, "m_s1", "m_s3"]) == 0


def test_check_writes_witness(fig1_path, tmp_path):
    out = tmp_path / "witness.txt"
    assert cli_main(["check", "--equiv", "fc", "--cap", "4",
                     "--witness", str(out), fig1_path, "m_s1", "m_s3"]) == 0
    assert out.read_text().startswith("triples ")


def test_oracle_exit_codes(fig1_path, tmp_path):
    assert cli_main(["oracle", "--flavor", "fc", "--depth", "2",
                     fig1_path, "m_s1", "m_s3"]) == 0
    assert cli_main(["oracle", "--flavor", "cn", "--depth", "2",
                     fig1_path, "m_s1", "m_s3"]) == 1
    cycle = tmp_path / "cycle.pn"
    cycle.write_text(CYCLE)
    assert cli_main(["oracle", "--flavor", "fc", "--depth", "2",
                     str(cycle), "m", "m"]) == 2


def test_bound_prints_least_bound(fig2_path, capsys):
    assert cli_main(["bound", "--cap", "8", fig2_path, "m0"]) == 0
    assert capsys.readouterr().out.strip() == "5"


def test_bound_cap_exceeded_is_error(fig2_path, capsys):
    assert cli_main(["bound", "--cap", "2", fig2_path, "m0"]) == 3
    assert "error" in capsys.readouterr().err


def test_explore_markings_and_dot(fig2_path, tmp_path, capsys):
    dot = tmp_path / "g.dot"
    assert cli_main(["explore", "--what", "markings", "--cap", "8",
                     "--dot", str(dot), fig2_path, "m0"]) == 0
    assert capsys.readouterr().out.startswith("markings ")
    assert dot.read_text().startswith("digraph")


def test_explore_im_dot(fig2_path, tmp_path, capsys):
    dot = tmp_path / "im.dot"
    assert cli_main(["explore", "--what", "im", "--cap", "8",
                     "--dot", str(dot), fig2_path, "m0"]) == 0
    out = capsys.readouterr().out
    count = int(out.split()[-1])
    assert dot.read_text().count("[label=") >= count


def test_explore_oim(fig2_path, capsys):
    assert cli_main(["explore", "--what", "oim", "--cap", "8",
                     fig2_path, "m0"]) == 0
    assert capsys.readouterr().out.startswith("ordered indexed markings ")


def test_usage_error_exit_64(capsys):
    assert cli_main(["check", "--equiv", "zz", "x.pn", "a", "b"]) == 64
    assert cli_main(["frobnicate"]) == 64
    assert capsys.readouterr().err != ""


def test_missing_file_is_runtime_error(capsys):
    assert cli_main(["check", "--equiv", "fc", "/nonexistent.pn",
                     "a", "b"]) == 3


def test_unknown_marking_is_runtime_error(fig1_path, capsys):
    assert cli_main(["check", "--equiv", "fc", fig1_path, "m_s1",
                     "nope"]) == 3
    assert "no marking" in capsys.readouterr().err


def test_parse_error_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.pn"
    bad.write_text("net n\ntrans t a : -> p\n")
    assert cli_main(["check", "--equiv", "fc", str(bad), "a", "b"]) == 3


def test_corpus_smoke(capsys):
    assert cli_main(["--seed", "7", "corpus", "--count", "5",
                     "--depth", "4"]) == 0
    assert "0 disagreements" in capsys.readouterr().out
