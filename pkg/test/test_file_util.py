import os

import pytest

from secureagg.utils.file_util import (replace_extension, json_store,
                                       json_load, text_store)


def test_replace_extension():
    assert replace_extension("out/run.txt", ".json") == "out/run.json"
    assert replace_extension("run", ".json") == "run.json"
    with pytest.raises(AssertionError):
        replace_extension("run.txt", "json")


def test_json_store(tmp_path):
    path = str(tmp_path / "a" / "b" / "keys.json")
    json_store({"z": 1, "a": 2}, path)
    assert json_load(path) == {"z": 1, "a": 2}
    assert list(json_load(path)) == ["a", "z"]
    json_store({"z": 1, "a": 2}, path, sort_keys=False)
    assert list(json_load(path)) == ["z", "a"]
    with pytest.raises(AssertionError):
        json_store({}, str(tmp_path / "keys.txt"))
    with pytest.raises(AssertionError):
        json_load(str(tmp_path / "missing.json"))


def test_text_store(tmp_path):
    path = str(tmp_path / "sub" / "summary.txt")
    text_store("sum 60\n", path)
    assert os.path.exists(path)
    with open(path) as f:
        assert f.read() == "sum 60\n"
