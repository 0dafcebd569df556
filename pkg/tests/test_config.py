import json
from dataclasses import fields

import pytest

from wavelearn.core import constants
from wavelearn.core.errors import FileFormatError, InvalidArgumentError
from wavelearn.core.file_io import read_key_values, write_key_values
from wavelearn.core.initialization import (
    build_synth_config,
    build_training_config,
    load_user_config,
    resolve_section,
    schema_defaults,
)
from wavelearn.models.datagen import BaseWave, SynthConfig
from wavelearn.models.training import TrainingConfig


@pytest.mark.parametrize(("section", "config_cls"), [("training", TrainingConfig), ("synth", SynthConfig)])
def test_schema_defaults_match_dataclass_defaults(section, config_cls):
    defaults = config_cls().to_dict()
    for name, value in schema_defaults(section).items():
        assert defaults[name] == value, name


def test_schema_covers_all_tunable_fields():
    assert set(schema_defaults("training")) == {f.name for f in fields(TrainingConfig)} - {"seed"}
    assert set(schema_defaults("synth")) == {f.name for f in fields(SynthConfig)} - {"seed"}


def test_analysis_and_ingest_defaults():
    analysis = schema_defaults("analysis")
    assert analysis["iterations"] == constants.DEFAULT_CASCADE_ITERATIONS
    assert analysis["density"] == constants.DEFAULT_SAMPLE_DENSITY
    assert analysis["zero_top_scales"] == constants.DEFAULT_ZERO_TOP_SCALES
    assert schema_defaults("ingest") == {"length": 1024, "hop": None}


def test_precedence_default_file_flag():
    user = {"training": {"k": 8, "lambda1": 0.25}}
    values = resolve_section("training", user, {"k": 12, "levels": None})
    assert values["k"] == 12
    assert values["lambda1"] == 0.25
    assert values["levels"] == 6
    assert values["lambda2"] == 0.5


def test_resolve_rejects_unknown_items():
    with pytest.raises(InvalidArgumentError):
        resolve_section("training", {"training": {"momentum": 0.5}})
    with pytest.raises(InvalidArgumentError):
        resolve_section("training", {"training": [1, 2]})
    with pytest.raises(InvalidArgumentError):
        resolve_section("plugins")


def test_build_training_config_applies_seed_and_checks():
    config = build_training_config({"training": {"batch_size": "16"}}, {"max_steps": 10}, seed=7)
    assert config.batch_size == 16
    assert config.max_steps == 10
    assert config.seed == 7
    with pytest.raises(InvalidArgumentError):
        build_training_config(overrides={"k": 7})
    with pytest.raises(InvalidArgumentError):
        build_training_config(overrides={"k": 2.5})


def test_build_synth_config_coerces_values():
    config = build_synth_config(
        {"synth": {"base": "square", "window_count_range": "2..4", "windowed": "true"}}, seed=3
    )
    assert config.base is BaseWave.SQUARE
    assert config.window_count_range == (2, 4)
    assert config.windowed is True
    assert config.seed == 3
    with pytest.raises(InvalidArgumentError):
        build_synth_config({"synth": {"base": "triangle"}})


def test_from_dict_rejects_unknown_fields():
    with pytest.raises(InvalidArgumentError):
        TrainingConfig.from_dict({"k": 4, "warmup": 10})


def test_training_config_round_trips_through_config_txt(tmp_path):
    config = TrainingConfig(k=8, levels=4, lambda1=0.125, learning_rate=3e-4, seed=5)
    path = write_key_values(tmp_path / "config.txt", config.to_dict())
    restored = TrainingConfig.from_dict(read_key_values(path))
    assert restored == config


def test_synth_config_round_trips_through_config_txt(tmp_path):
    config = SynthConfig(base=BaseWave.SAWTOOTH, windowed=True, window_count_range=(2, 5), seed=9)
    path = write_key_values(tmp_path / "synth.txt", config.to_dict())
    assert SynthConfig.from_dict(read_key_values(path)) == config


def test_training_config_problems():
    assert TrainingConfig().problems() == []
    problems = TrainingConfig(k=3, lambda1=-1.0, adam_beta1=1.0, learning_rate=0.0).problems()
    assert len(problems) == 4


def test_load_user_config(tmp_path, caplog):
    assert load_user_config(None) == {}
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"training": {"k": 4}, "extras": {}}))
    assert load_user_config(path)["training"] == {"k": 4}
    assert "extras" in caplog.text
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  oops\n}")
    with pytest.raises(FileFormatError) as excinfo:
        load_user_config(broken)
    assert excinfo.value.line == 2
    with pytest.raises(FileFormatError):
        load_user_config(tmp_path / "missing.json")
    listed = tmp_path / "list.json"
    listed.write_text("[]")
    with pytest.raises(FileFormatError):
        load_user_config(listed)
