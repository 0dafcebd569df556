import numpy as np
import pytest
from scipy.io import wavfile

from wavelearn.core import file_io
from wavelearn.core.errors import FileFormatError, InvalidArgumentError, UnknownWaveletError
from wavelearn.core.plotting import Series, format_number, render_svg
from wavelearn.engine.filterbank import classical_filter
from wavelearn.engine.transform import dwt, flatten
from wavelearn.models.analysis import SampledFunction
from wavelearn.models.filters import ScalingFilter
from wavelearn.models.run import RunManifest
from wavelearn.models.training import StepRecord


def test_filter_file_round_trip_is_exact(tmp_path):
    h = ScalingFilter(np.random.default_rng(0).standard_normal(8), name="learned")
    path = file_io.save_filter(h, tmp_path / "filter.json")
    restored = file_io.load_filter(path)
    assert restored.name == "learned"
    np.testing.assert_array_equal(restored.coeffs, h.coeffs)


def test_filter_file_errors(tmp_path):
    mismatched = tmp_path / "mismatch.json"
    mismatched.write_text('{"name": "x", "k": 4, "h": [1, 0]}')
    with pytest.raises(FileFormatError):
        file_io.load_filter(mismatched)
    odd = tmp_path / "odd.json"
    odd.write_text('{"h": [1, 0, 0]}')
    with pytest.raises(FileFormatError):
        file_io.load_filter(odd)
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(FileFormatError):
        file_io.load_filter(broken)


def test_resolve_filter_by_path_or_name(tmp_path):
    path = file_io.save_filter(classical_filter("coif2"), tmp_path / "c.json")
    np.testing.assert_array_equal(file_io.resolve_filter(str(path)).coeffs, classical_filter("coif2").coeffs)
    assert file_io.resolve_filter("DB4").name == "db4"
    with pytest.raises(UnknownWaveletError):
        file_io.resolve_filter("meyer")


def test_coefficient_file_round_trip(tmp_path):
    flat = flatten(dwt(np.random.default_rng(1).standard_normal(64), classical_filter("db3"), 3))
    path = file_io.write_coefficients(tmp_path / "coef.txt", flat, 6, "db3")
    assert path.read_text().splitlines()[0] == "64 3 6 db3"
    restored, header = file_io.read_coefficients(path)
    np.testing.assert_array_equal(restored.values, flat.values)
    assert restored.layout == flat.layout
    assert header.filter_name == "db3"


def test_coefficient_header_replaces_spaces(tmp_path):
    flat = flatten(dwt(np.zeros(8), classical_filter("haar"), 1))
    path = file_io.write_coefficients(tmp_path / "coef.txt", flat, 2, "my filter")
    _, header = file_io.read_coefficients(path)
    assert header.filter_name == "my_filter"


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("", None),
        ("8 2 db2\n", 1),
        ("8 two 4 db2\n", 1),
        ("12 3 4 db2\n" + "0\n" * 12, 1),
        ("8 2 4 db2\n" + "0\n" * 3 + "nan\n", 5),
        ("8 2 4 db2\n" + "0\n" * 7, 8),
    ],
)
def test_coefficient_file_diagnostics(tmp_path, text, line):
    path = tmp_path / "coef.txt"
    path.write_text(text)
    with pytest.raises(FileFormatError) as excinfo:
        file_io.read_coefficients(path)
    assert excinfo.value.line == line
    assert excinfo.value.path == str(path)


def test_signal_csv_round_trip_and_header(tmp_path):
    x = np.random.default_rng(2).standard_normal(16)
    path = file_io.write_signal(tmp_path / "x.csv", x)
    np.testing.assert_array_equal(file_io.read_signal(path), x)
    with_header = tmp_path / "header.csv"
    with_header.write_text("value\n1.5\n-2\n")
    np.testing.assert_array_equal(file_io.read_signal(with_header), [1.5, -2.0])


def test_signal_csv_errors(tmp_path):
    two_columns = tmp_path / "two.csv"
    two_columns.write_text("1,2\n")
    with pytest.raises(FileFormatError):
        file_io.read_signal(two_columns)
    empty = tmp_path / "empty.csv"
    empty.write_text("value\n")
    with pytest.raises(FileFormatError):
        file_io.read_signal(empty)
    with pytest.raises(FileFormatError):
        file_io.read_signal(tmp_path / "missing.csv")


def test_wav_write_clips_and_reads_back(tmp_path, caplog):
    path = file_io.write_signal(tmp_path / "x.wav", [0.5, -0.25, 1.5, -2.0])
    rate, data = wavfile.read(str(path))
    assert data.dtype == np.int16
    np.testing.assert_array_equal(data, [16384, -8192, 32767, -32768])
    assert "截断" in caplog.text
    np.testing.assert_array_equal(file_io.read_signal(path)[:2], [0.5, -0.25])


def test_dataset_round_trip(tmp_path):
    signals = [np.full(8, float(i)) for i in range(3)]
    paths = file_io.write_dataset(tmp_path / "data", signals, {"source": "test"})
    assert [p.name for p in paths] == ["signal_00000.csv", "signal_00001.csv", "signal_00002.csv"]
    restored = file_io.read_dataset(tmp_path / "data")
    for original, copy in zip(signals, restored, strict=True):
        np.testing.assert_array_equal(original, copy)


def test_dataset_errors(tmp_path):
    directory = tmp_path / "data"
    file_io.write_dataset(directory, [np.zeros(8), np.zeros(8)], {})
    (directory / "signal_00001.csv").unlink()
    with pytest.raises(FileFormatError):
        file_io.read_dataset(directory)
    mixed = tmp_path / "mixed"
    file_io.write_dataset(mixed, [np.zeros(8), np.zeros(16)], {})
    with pytest.raises(FileFormatError):
        file_io.read_dataset(mixed)
    with pytest.raises(FileFormatError):
        file_io.read_dataset(tmp_path / "nowhere")


def test_history_round_trip(tmp_path):
    records = [StepRecord(1, 3.0, 1.0, 1.5, 0.5), StepRecord(2, 0.1 + 0.2, 0.1, 0.2, 0.0)]
    path = file_io.write_history(tmp_path / "history.csv", records)
    assert path.read_text().splitlines()[0] == "step,total,recon,sparsity,constraint"
    assert file_io.read_history(path) == records


def test_history_errors(tmp_path):
    path = tmp_path / "history.csv"
    path.write_text("step,total,recon,sparsity,constraint\n1,2,3\n")
    with pytest.raises(FileFormatError) as excinfo:
        file_io.read_history(path)
    assert excinfo.value.line == 2


def test_key_values_ignore_comments(tmp_path):
    path = tmp_path / "config.txt"
    path.write_text("# comment\nk = 4\n\nname = a = b\n")
    assert file_io.read_key_values(path) == {"k": "4", "name": "a = b"}
    path.write_text("broken line\n")
    with pytest.raises(FileFormatError):
        file_io.read_key_values(path)


def test_sampled_function_file(tmp_path):
    function = SampledFunction(np.array([1.0, 0.5, 0.0]), 0.5)
    path = file_io.write_sampled_function(tmp_path / "phi.csv", function)
    assert path.read_text().splitlines() == ["t,value", "0,1", "0.5,0.5", "1,0"]
    t, values = file_io.read_series(path)
    np.testing.assert_array_equal(t, [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(values, [1.0, 0.5, 0.0])


def test_read_series_single_column_uses_index(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("3\n4\n5\n")
    x, y = file_io.read_series(path)
    np.testing.assert_array_equal(x, [0.0, 1.0, 2.0])
    np.testing.assert_array_equal(y, [3.0, 4.0, 5.0])


def test_manifest_round_trip(tmp_path):
    manifest = RunManifest(
        command="synth",
        arguments={"length": 64, "base": "sine"},
        seed=2,
        version="0.1.0",
        outputs=["a.csv"],
        extra={"count": 1},
    )
    path = file_io.write_manifest(tmp_path / "manifest.json", manifest)
    restored = file_io.read_manifest(path)
    assert restored == manifest
    bad = tmp_path / "bad.json"
    bad.write_text('{"seed": 1}')
    with pytest.raises(FileFormatError):
        file_io.read_manifest(bad)


def test_atomic_write_leaves_no_temporary_files(tmp_path):
    file_io.atomic_write_text(tmp_path / "nested" / "out.txt", "data\n")
    assert [p.name for p in (tmp_path / "nested").iterdir()] == ["out.txt"]


def test_render_svg_is_deterministic():
    series = [Series("a", np.arange(5.0), np.arange(5.0) ** 2), Series("b", np.arange(3.0), np.ones(3))]
    first = render_svg(series, title="t")
    assert first == render_svg(series, title="t")
    assert first.startswith("<?xml")
    assert first.count("<polyline") == 2
    assert 'width="800"' in first


def test_render_svg_escapes_labels_and_needs_series():
    svg = render_svg([Series("a<b", np.arange(2.0), np.zeros(2))])
    assert "a&lt;b" in svg
    with pytest.raises(InvalidArgumentError):
        render_svg([])


def test_format_number():
    assert format_number(-0.0) == "0"
    assert format_number(0.123456) == "0.1235"
    assert format_number(12346.0) == "1.235e+04"
