# Copyright 2025 The crysgroups Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pytest

from crysgroups import cli
from crysgroups.entities.certificate import Certificate, CertificateKind
from crysgroups.shared_libraries.errors import ParameterError
from crysgroups.tools.crys import CrysGroup, run_checks


@pytest.fixture
def bundle(tmp_path):
    path = tmp_path / "c8.json"
    code = cli.main(
        ["build", "--family", "cyclic", "--factors", "2^3", "--out", str(path)]
    )
    assert code == cli.EXIT_OK
    return path


def test_parse_factors():
    assert cli.parse_factors("2^3,3^2") == [(2, 3), (3, 2)]
    assert cli.parse_factors("5") == [(5, 1)]
    with pytest.raises(ParameterError):
        cli.parse_factors("2^x")


def test_build_writes_bundle(bundle, capsys):
    data = json.loads(bundle.read_text())
    assert data["dimension"] == 8
    assert data["non_split"] is True
    assert data["spec"]["factors"] == [[2, 3]]
    assert data["cocycle"]["gen_values"]["a"][0] == "1/8"
    assert data["certificates"] == []


def test_build_is_deterministic(tmp_path):
    paths = [tmp_path / "one.json", tmp_path / "two.json"]
    for path in paths:
        assert (
            cli.main(["build", "--family", "bicyclic", "--p", "3", "--out", str(path)])
            == cli.EXIT_OK
        )
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_build_with_certificates(tmp_path, capsys):
    path = tmp_path / "a4.json"
    code = cli.main(
        ["build", "--family", "alternating", "--certify", "--out", str(path)]
    )
    assert code == cli.EXIT_OK
    data = json.loads(path.read_text())
    assert data["dimension"] == 12
    assert len(data["certificates"]) == 6
    out = capsys.readouterr().out
    assert "| check" in out
    assert "TorsionFree" in out


@pytest.mark.parametrize(
    "argv,hypothesis",
    [
        (["--family", "cyclic", "--factors", "2^2"], "n_1 >= 3 required"),
        (
            ["--family", "cyclic", "--factors", "2^3,3^1"],
            "n_i >= 2 required for i >= 2",
        ),
        (["--family", "bicyclic", "--p", "2"], "requires p > 2"),
        (["--family", "cyclic", "--factors", "2^x"], "factors written as p^n,q^m"),
        (["--family", "cyclic"], "factors given"),
    ],
)
def test_build_rejects_parameters(tmp_path, capsys, argv, hypothesis):
    out = tmp_path / "bad.json"
    code = cli.main(["build", *argv, "--out", str(out)])
    assert code == cli.EXIT_INVALID
    assert hypothesis in capsys.readouterr().err
    assert not out.exists()


def test_unknown_family_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main(["build", "--family", "dihedral"])
    assert info.value.code == 2


def test_verify_round_trip(bundle, capsys):
    code = cli.main(
        ["verify", str(bundle), "--checks", "torsionfree,indecomposable,dimension"]
    )
    assert code == cli.EXIT_OK
    report_path = bundle.with_name("c8.certificates.json")
    report = json.loads(report_path.read_text())
    verdicts = [c["verdict"] for c in report["certificates"]]

    crys = CrysGroup.from_payload(json.loads(bundle.read_text()))
    direct = run_checks(crys, ["torsionfree", "indecomposable", "dimension"])
    assert verdicts == [c.verdict for c in direct]
    assert report["checks"] == ["torsionfree", "indecomposable", "dimension"]


def test_verify_unknown_check(bundle, capsys):
    assert cli.main(["verify", str(bundle), "--checks", "volume"]) == cli.EXIT_INVALID
    assert "unknown checks" in capsys.readouterr().err


def test_verify_reports_failure(bundle, mocker):
    failing = Certificate(kind=CertificateKind.TORSION_FREE, verdict=False)
    patched = mocker.patch("crysgroups.cli.run_checks", return_value=[failing])
    code = cli.main(["verify", str(bundle), "--checks", "torsionfree", "--no-oracle"])
    assert code == cli.EXIT_FAILED
    _, _, checks, oracle = patched.call_args.args
    assert checks == ["torsionfree"]
    assert oracle is False


def test_report_renders_certificates(bundle, capsys):
    cli.main(["verify", str(bundle), "--checks", "dimension"])
    capsys.readouterr()
    code = cli.main(["report", str(bundle.with_name("c8.certificates.json"))])
    assert code == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "Dimension" in out
    assert "basis" in out


def test_report_without_certificates(bundle, capsys):
    assert cli.main(["report", str(bundle)]) == cli.EXIT_OK
    assert "no certificates" in capsys.readouterr().out


def test_oracle_suite(tmp_path, capsys):
    out = tmp_path / "oracle.json"
    code = cli.main(
        [
            "oracle",
            "--family",
            "cyclic",
            "--factors",
            "2^3",
            "--trials",
            "10",
            "--out",
            str(out),
        ]
    )
    assert code == cli.EXIT_OK
    text = capsys.readouterr().out
    assert "MISMATCH" not in text
    assert "10 random cyclic cocycles" in text
    report = json.loads(out.read_text())
    assert report["checks"] == ["oracle"]


def test_computation_error_exits_with_failure(bundle, mocker, capsys):
    from crysgroups.shared_libraries.errors import ComputationError

    mocker.patch(
        "crysgroups.cli.run_checks", side_effect=ComputationError("no decision")
    )
    assert cli.main(["verify", str(bundle)]) == cli.EXIT_FAILED
    assert "no decision" in capsys.readouterr().err


def test_work_dir_resolves_relative_paths(tmp_path, monkeypatch):
    monkeypatch.setenv("CRYS_WORK_DIR", str(tmp_path))
    code = cli.main(["build", "--family", "alternating", "--out", "nested/a4.json"])
    assert code == cli.EXIT_OK
    assert (tmp_path / "nested" / "a4.json").exists()
