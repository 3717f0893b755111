import json
import os


def replace_extension(path, new_extension):
    """ replace an extension """
    assert new_extension.startswith("."), "extension has to start with '.'"
    return os.path.splitext(path)[0] + new_extension


def _make_parent_dir(path):
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)


def json_store(to_store, path, sort_keys=True):
    """ store sth to json file. sort_keys=False keeps insertion order, which
    the run reports rely on """
    assert path.endswith(".json"), "wrong file extension"
    _make_parent_dir(path)
    with open(path, "w") as json_file:
        json.dump(to_store, json_file, indent=4, sort_keys=sort_keys)


def json_load(path):
    """ load sth from json file """
    assert os.path.exists(path), "file not found {}".format(path)
    with open(path, "r") as json_file:
        return json.load(json_file)


def text_store(text, path):
    _make_parent_dir(path)
    with open(path, "w") as text_file:
        text_file.write(text)
