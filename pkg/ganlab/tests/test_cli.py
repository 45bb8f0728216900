import json

import numpy as np
import pytest

from ganlab.cli import main


def run(*argv) -> int:
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def checkpoint(small_corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("model") / "model.pt"
    assert run("train", "-i", small_corpus, "--arch", "baseline", "--epochs", 1,
               "--seed", 2, "-o", out) == 0
    return out


class TestTrainCommand:
    def test_writes_checkpoint_and_manifest(self, checkpoint):
        assert checkpoint.exists()
        manifest = json.loads((checkpoint.parent / "model.pt.manifest.json").read_text())
        assert manifest["tool"] == "ganlab"
        assert manifest["command"] == "train"
        assert manifest["config"]["architecture"] == "baseline"
        assert manifest["config"]["learning_rate"] == 5e-5
        assert manifest["config"]["levels"] == 20

    def test_bad_epochs_is_usage_error(self, small_corpus, tmp_path):
        assert run("train", "-i", small_corpus, "--epochs", 0,
                   "-o", tmp_path / "x.pt") == 1

    def test_missing_corpus_is_data_error(self, tmp_path):
        assert run("train", "-i", tmp_path / "nope.json", "--epochs", 1,
                   "-o", tmp_path / "x.pt") == 2

    def test_corrupt_corpus_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert run("train", "-i", bad, "--epochs", 1, "-o", tmp_path / "x.pt") == 2


class TestGenerateCommand:
    def test_writes_tensor_file_and_manifest(self, checkpoint, tmp_path):
        out = tmp_path / "raw.json"
        assert run("generate", "-m", checkpoint, "-n", 4, "--seed", 5, "-o", out) == 0
        obj = json.loads(out.read_text())
        assert obj["format_version"] == 1
        assert np.asarray(obj["tensors"]).shape == (4, 9, 9, 6)
        manifest = json.loads((tmp_path / "raw.json.manifest.json").read_text())
        assert manifest["config"]["n"] == 4

    def test_seeded_rerun_is_identical(self, checkpoint, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run("generate", "-m", checkpoint, "-n", 3, "--seed", 9, "-o", a) == 0
        assert run("generate", "-m", checkpoint, "-n", 3, "--seed", 9, "-o", b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_architecture_assertion(self, checkpoint, tmp_path):
        assert run("generate", "-m", checkpoint, "-n", 1, "--arch", "global",
                   "-o", tmp_path / "x.json") == 2

    def test_zero_samples_gives_empty_file(self, checkpoint, tmp_path):
        out = tmp_path / "empty.json"
        assert run("generate", "-m", checkpoint, "-n", 0, "-o", out) == 0
        assert json.loads(out.read_text())["tensors"] == []

    def test_missing_checkpoint_is_data_error(self, tmp_path):
        assert run("generate", "-m", tmp_path / "nope.pt", "-o", tmp_path / "x.json") == 2


class TestTopLevel:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run("--version")
        assert exc.value.code == 0
        assert "ganlab" in capsys.readouterr().out

    def test_no_command_is_usage_error(self):
        assert run() == 1
