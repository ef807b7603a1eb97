from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest

from streaming_icvi import exception as te
from streaming_icvi.core.types import IndexKind
from streaming_icvi.harness import (
    Dataset,
    Experiment,
    compare_conn,
    compare_series,
    generate_d4,
    ingest,
    normalize,
    presentation_order,
    records_frame,
    run_experiment,
    write_dataset,
)
from streaming_icvi.harness.cli import main
from streaming_icvi.harness.sweep import batch_shadow
from streaming_icvi.implement import FuzzySmart
from streaming_icvi.model import ExperimentConfig, SweepSettings, load_config

from tests.base import planted_stream


@pytest.fixture
def small() -> Dataset:
    samples, labels = planted_stream(7, 120, 2, 3)
    return Dataset(normalize(samples), labels.astype(np.int64))


@pytest.fixture
def small_csv(tmp_path, small):
    path = tmp_path / "small.csv"
    write_dataset(path, small)
    return path


def _config(**kwargs) -> ExperimentConfig:
    return ExperimentConfig.model_validate({"generator": "d4", "rho": 0.5, **kwargs})


class TestIngest:
    def test_labeled(self, write_csv):
        dataset = ingest(write_csv("0.0,10,1\n0.5,20,2\n1.0,30,2\n"))
        np.testing.assert_allclose(dataset.samples, [[0, 0], [0.5, 0.5], [1, 1]])
        assert dataset.labels.tolist() == [1, 2, 2]
        assert dataset.n_samples == 3
        assert dataset.dimension == 2

    def test_unlabeled(self, write_csv):
        dataset = ingest(write_csv("0.1,0.2,7\n0.3,0.4,9\n"), has_labels=False)
        assert dataset.labels is None
        assert dataset.dimension == 3

    def test_header(self, write_csv):
        path = write_csv("x,y,label\n0.1,0.2,1\n0.3,0.4,2\n")
        with pytest.warns(te.IcviHeaderWarning):
            dataset = ingest(path)
        assert dataset.n_samples == 2
        assert dataset.labels.tolist() == [1, 2]

    def test_non_numeric(self, write_csv):
        path = write_csv("0.1,0.2,1\n0.3,abc,2\n0.5,0.6,1\n")
        with pytest.raises(te.IcviDataError) as exc_info:
            ingest(path)
        assert (exc_info.value.row, exc_info.value.column) == (1, 1)

    def test_long_row(self, write_csv):
        path = write_csv("0.1,0.2,1\n0.3,0.4,2\n0.5,0.6,0.7,1\n")
        with pytest.raises(te.IcviDataError) as exc_info:
            ingest(path)
        assert exc_info.value.row == 2

    def test_short_row(self, write_csv):
        path = write_csv("0.1,0.2,1\n0.3,0.4\n0.5,0.6,1\n")
        with pytest.raises(te.IcviDataError) as exc_info:
            ingest(path)
        assert exc_info.value.row == 1

    def test_single_row(self, write_csv):
        with pytest.raises(te.IcviDataError):
            ingest(write_csv("0.1,0.2,1\n"))

    def test_constant_feature(self, write_csv):
        with pytest.raises(te.IcviDataError) as exc_info:
            ingest(write_csv("0.5,0.1,1\n0.5,0.2,1\n"))
        assert exc_info.value.column == 0

    def test_non_integer_label(self, write_csv):
        with pytest.raises(te.IcviDataError) as exc_info:
            ingest(write_csv("0.1,0.2,1.5\n0.3,0.4,2\n"))
        assert (exc_info.value.row, exc_info.value.column) == (0, 2)

    def test_non_finite(self, write_csv):
        with pytest.raises(te.IcviDataError):
            ingest(write_csv("0.1,0.2,1\n0.3,inf,2\n"))

    def test_label_only(self, write_csv):
        with pytest.raises(te.IcviDataError):
            ingest(write_csv("1\n2\n"))

    def test_empty(self, write_csv):
        with pytest.raises(te.IcviDataError):
            ingest(write_csv(""))

    def test_missing(self, tmp_path):
        with pytest.raises(te.IcviFileNotFoundError):
            ingest(tmp_path / "missing.csv")


def test_normalize_identity():
    features = np.array([[0.0, 1.0], [0.25, 0.0], [1.0, 0.5]])
    np.testing.assert_array_equal(normalize(features), features)


class TestGenerateD4:
    def test_shape(self, d4):
        assert d4.n_samples == 2000
        assert d4.dimension == 2
        labels, counts = np.unique(d4.labels, return_counts=True)
        assert labels.tolist() == [1, 2, 3, 4]
        assert counts.tolist() == [500] * 4

    def test_unit_square(self, d4):
        assert d4.samples.min() >= 0.0
        assert d4.samples.max() <= 1.0
        np.testing.assert_allclose(d4.samples.min(axis=0), 0.0)
        np.testing.assert_allclose(d4.samples.max(axis=0), 1.0)

    def test_quadrants(self, d4):
        centers = np.stack(
            [d4.samples[d4.labels == label].mean(axis=0) for label in range(1, 5)]
        )
        np.testing.assert_array_equal(
            centers > 0.5, [[False, False], [True, False], [False, True], [True, True]]
        )

    def test_deterministic(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_dataset(first, generate_d4(3))
        write_dataset(second, generate_d4(3))
        assert first.read_bytes() == second.read_bytes()

    def test_seed_changes_samples(self, d4):
        assert not np.array_equal(generate_d4(1).samples, d4.samples)


class TestPresentationOrder:
    labels = np.array([2, 1, 2, 3, 1, 3, 2])

    def test_as_is(self):
        np.testing.assert_array_equal(
            presentation_order(self.labels, 7, "as-is"), np.arange(7)
        )

    def test_shuffled(self):
        order = presentation_order(None, 7, "shuffled", seed=4)
        np.testing.assert_array_equal(np.sort(order), np.arange(7))

    def test_cluster_by_cluster(self):
        order = presentation_order(self.labels, 7, "cluster-by-cluster", seed=4)
        assert self.labels[order].tolist() == [1, 1, 2, 2, 2, 3, 3]
        np.testing.assert_array_equal(np.sort(order), np.arange(7))

    def test_cluster_order(self):
        order = presentation_order(
            self.labels, 7, "cluster-by-cluster", cluster_order=(3, 1, 2)
        )
        assert self.labels[order].tolist() == [3, 3, 1, 1, 2, 2, 2]

    def test_seed_determines_order(self):
        first = presentation_order(self.labels, 7, "cluster-by-cluster", seed=9)
        second = presentation_order(self.labels, 7, "cluster-by-cluster", seed=9)
        np.testing.assert_array_equal(first, second)

    def test_not_a_permutation(self):
        with pytest.raises(te.IcviConfigError):
            presentation_order(
                self.labels, 7, "cluster-by-cluster", cluster_order=(1, 2)
            )

    def test_needs_labels(self):
        with pytest.raises(te.IcviConfigError):
            presentation_order(None, 7, "cluster-by-cluster")


class TestConfig:
    def test_defaults(self):
        config = _config(rho_a=0.6)
        assert config.smart
        assert config.indices == tuple(IndexKind)
        assert config.art.rho == 0.5

    def test_fuzzy_art_without_conn(self):
        assert not _config(indices=["ch", "sil"]).smart

    def test_smart_from_conn(self):
        config = _config(rho_a=0.7, indices=["conn"])
        assert config.smart
        assert config.art_a.rho == 0.7

    @pytest.mark.parametrize(
        "values",
        [
            {"generator": None},
            {"dataset": "data.csv"},
            {"rho": 1.5},
            {"rho_a": 0.4},
            {"clusterer": "smart", "rho_a": None, "indices": ["ch"]},
            {"clusterer": "fuzzy-art", "indices": ["conn"]},
            {"indices": ["ch", "ch"]},
            {"gnuplot": "plot.gp"},
            {"conn_matrix": "conn.csv", "indices": ["ch"]},
            {"beta": 0.0},
        ],
    )
    def test_invalid(self, values):
        with pytest.raises(ValueError):  # noqa: PT011
            _config(**{"rho_a": 0.6, **values})

    def test_unlabeled_cluster_by_cluster(self):
        with pytest.raises(ValueError, match="labeled"):
            ExperimentConfig.model_validate({
                "dataset": "data.csv",
                "has_labels": False,
                "rho": 0.5,
                "indices": ["ch"],
            })

    def test_load(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(
            'generator = "d4"\nrho = 0.6\nindices = ["ch", "db"]\n'
            'records = "out.csv"\n\n[sweep]\npoints = 10\n',
            encoding="utf-8",
        )
        config = load_config(path, rho=0.7, seed=None)
        assert config.rho == 0.7
        assert config.indices == (IndexKind.CH, IndexKind.DB)
        assert config.records == tmp_path / "out.csv"
        assert config.sweep.points == 10

    def test_load_invalid(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text("rho = \n", encoding="utf-8")
        with pytest.raises(te.IcviConfigError):
            load_config(path)

    def test_load_missing(self, tmp_path):
        with pytest.raises(te.IcviFileNotFoundError):
            load_config(tmp_path / "missing.toml")

    def test_sweep_grid(self):
        grid = SweepSettings().grid(0.5)
        assert len(grid) == 8
        assert grid[0] == pytest.approx(0.5)
        assert grid[-1] == pytest.approx(0.96)

    @pytest.mark.parametrize(
        "values", [(0.5, 0.6), (0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95)]
    )
    def test_sweep_grid_invalid(self, values):
        with pytest.raises(te.IcviConfigError):
            SweepSettings(rho_a_values=values).grid(0.5)


class TestRunExperiment:
    def test_records(self, small):
        result = run_experiment(_config(indices=["ch", "db", "sil"]), small)
        records = result.records
        assert len(records) == small.n_samples
        assert [r.step for r in records] == list(range(small.n_samples))
        assert sorted(r.sample for r in records) == list(range(small.n_samples))
        ks = [r.k for r in records]
        assert ks == sorted(ks)
        assert ks[-1] == result.clusterer.n_clusters == result.summary.final_k
        for record in records:
            assert set(record.values) == {IndexKind.CH, IndexKind.DB, IndexKind.SIL}
            if record.k < 2:
                assert set(record.values.values()) == {None}

    def test_cluster_creation_steps(self, small):
        result = run_experiment(_config(indices=[]), small)
        steps = result.summary.cluster_creation_steps
        assert steps[0] == 0
        assert len(steps) == result.summary.final_k

    def test_empty_index_set(self, small, tmp_path):
        records = tmp_path / "records.csv"
        result = run_experiment(_config(indices=[], records=records), small)
        frame = pd.read_csv(records)
        assert list(frame.columns) == ["step", "sample", "cluster", "k"]
        assert len(frame) == small.n_samples
        assert result.summary.final_values == {}

    def test_records_frame_blank_cells(self, small, tmp_path):
        records = tmp_path / "records.csv"
        result = run_experiment(_config(indices=["xb"], records=records), small)
        frame = records_frame(result.records, (IndexKind.XB,))
        assert np.isnan(frame["xb"].iloc[0])
        first_line = records.read_text(encoding="utf-8").splitlines()[1]
        assert first_line.endswith(",")

    def test_smart_with_conn(self, small):
        config = _config(rho_a=0.8, indices=["conn", "ch"])
        result = run_experiment(config, small)
        assert isinstance(result.clusterer, FuzzySmart)
        assert result.conn is not None
        assert result.conn.n_samples == small.n_samples
        assert result.conn.n_prototypes == result.clusterer.n_prototypes
        assert result.summary.n_prototypes == result.clusterer.n_prototypes
        for record in result.records:
            if (value := record.values[IndexKind.CONN]) is not None:
                assert 0.0 <= value <= 1.0
            assert record.prototype is not None

    def test_conn_state_per_step(self, small):
        config = _config(rho_a=0.8, indices=["conn"])
        experiment = Experiment(config, small)
        for record in experiment.steps():
            state = experiment.conn
            assert state.n_samples == record.step + 1
            np.testing.assert_array_equal(state.conn, state.conn.T)

    def test_ari(self, small):
        result = run_experiment(_config(indices=[]), small)
        assert result.summary.ari is not None
        assert -1.0 <= result.summary.ari <= 1.0

    def test_outputs(self, small, tmp_path):
        paths = {
            "records": tmp_path / "records.csv",
            "summary": tmp_path / "summary.json",
            "gnuplot": tmp_path / "plot.gp",
            "conn_matrix": tmp_path / "conn.csv",
            "network": tmp_path / "network.json",
        }
        config = _config(rho_a=0.8, indices=["conn", "db"], **paths)
        result = run_experiment(config, small)

        summary = json.loads(paths["summary"].read_text(encoding="utf-8"))
        assert summary["final_k"] == result.summary.final_k
        assert summary["directions"] == {"conn": "max-better", "db": "min-better"}
        script = paths["gnuplot"].read_text(encoding="utf-8")
        assert "set datafile separator ','" in script
        assert script.count("plot data") == 2
        conn = pd.read_csv(paths["conn_matrix"], index_col=0)
        assert conn.shape == (result.conn.n_prototypes, result.conn.n_prototypes + 1)
        assert conn["cluster"].tolist() == result.conn.proto_cluster
        network = json.loads(paths["network"].read_text(encoding="utf-8"))
        assert network["kind"] == "smart"
        assert network["map_ab"] == result.clusterer.map_ab

    def test_deterministic(self, small, tmp_path):
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        run_experiment(_config(rho_a=0.8, records=first, seed=3), small)
        run_experiment(_config(rho_a=0.8, records=second, seed=3), small)
        assert first.read_bytes() == second.read_bytes()

    def test_batch_sigma_data(self, small):
        result = run_experiment(_config(indices=["ni"], sigma_data="batch"), small)
        assert result.summary.final_values["ni"] is not None


class TestCompareSeries:
    def test_identical(self):
        series = [None, 0.5, 0.6, 0.7, 0.65]
        comparison = compare_series(series, series)
        assert comparison.n_paired == 4
        assert comparison.pearson == pytest.approx(1.0)
        assert comparison.mse == 0.0
        assert comparison.spike_fraction is None

    def test_identical_constant(self):
        comparison = compare_series([0.5] * 5, [0.5] * 5)
        assert comparison.pearson == 1.0

    def test_constant_offset(self):
        comparison = compare_series([0.5] * 5, [0.6] * 5)
        assert comparison.pearson is None
        assert comparison.mse == pytest.approx(0.01)

    def test_too_few_steps(self):
        comparison = compare_series([None, 0.1, 0.2], [None, 0.1, 0.3])
        assert comparison.n_paired == 2
        assert comparison.pearson is None

    def test_no_paired_steps(self):
        comparison = compare_series([None, None], [None, 0.3])
        assert comparison.n_paired == 0
        assert comparison.mse is None

    def test_length_mismatch(self):
        with pytest.raises(te.IcviValueError):
            compare_series([0.1, 0.2], [0.1])

    @pytest.mark.parametrize(("creations", "expected"), [((5,), 1.0), ((0,), 0.0)])
    def test_spike_fraction(self, creations, expected):
        incremental = [0.0] * 10
        batch = [0.0] * 10
        batch[6] = 1.0
        comparison = compare_series(
            incremental, batch, creations, spike_window=3
        )
        assert comparison.spike_fraction == expected


class TestSweep:
    def test_batch_shadow_single_cluster(self):
        network = FuzzySmart(0.1, 0.9)
        network.present([0.2, 0.2])
        network.present([0.3, 0.3])
        assert batch_shadow(network, np.array([[0.2, 0.2], [0.3, 0.3]])) is None

    def test_batch_shadow(self, small):
        network = FuzzySmart(0.6, 0.85)
        for x in small.samples:
            network.present(x)
        value = batch_shadow(network, small.samples)
        assert network.n_clusters >= 2
        assert value is not None
        assert 0.0 <= value <= 1.0

    def test_compare_conn(self, small):
        sweep = SweepSettings(points=8, maximum=0.9, max_workers=2)
        config = _config(rho_a=0.5, indices=["conn"], sweep=sweep)
        report = compare_conn(config, small)
        assert [point.rho_a for point in report.points] == pytest.approx(
            list(sweep.grid(0.5))
        )
        for point in report.points:
            assert len(point.incremental) == len(point.batch) == small.n_samples
            assert point.creations == sorted(point.creations)
        assert len(report.frame()) == 8
        series = report.series_frame()
        assert len(series) == 8 * small.n_samples
        assert list(series.columns) == [
            "rho_a",
            "step",
            "incremental",
            "batch",
            "error",
            "created",
        ]

    def test_compare_conn_order_independent_of_workers(self, small):
        sweep = SweepSettings(points=8, maximum=0.9)
        serial = compare_conn(
            _config(rho_a=0.5, sweep=sweep.model_copy(update={"max_workers": 1})),
            small,
        )
        parallel = compare_conn(
            _config(rho_a=0.5, sweep=sweep.model_copy(update={"max_workers": 4})),
            small,
        )
        assert serial == parallel


class TestCli:
    def test_generate(self, tmp_path):
        path = tmp_path / "d4.csv"
        assert main(["generate", str(path), "--seed", "2"]) == 0
        dataset = ingest(path)
        assert dataset.n_samples == 2000
        np.testing.assert_allclose(dataset.samples, generate_d4(2).samples)

    def test_run(self, small_csv, tmp_path, capsys):
        records = tmp_path / "records.csv"
        code = main(
            [
                "run",
                "--dataset",
                str(small_csv),
                "--rho",
                "0.5",
                "--indices",
                "ch,db",
                "--records",
                str(records),
            ]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["clusterer"] == "FuzzyArt"
        frame = pd.read_csv(records)
        assert list(frame.columns) == ["step", "sample", "cluster", "k", "ch", "db"]

    def test_run_with_config_file(self, small_csv, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(
            f'dataset = "{small_csv.name}"\nrho = 0.5\nrho_a = 0.8\n'
            'indices = ["conn"]\nsummary = "summary.json"\n',
            encoding="utf-8",
        )
        assert main(["run", "--config", str(path), "--rho-a", "0.9"]) == 0
        summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
        assert summary["rho_a"] == 0.9
        assert summary["clusterer"] == "FuzzySmart"

    def test_config_error(self):
        args = ["run", "--generator", "d4", "--rho", "0.5"]
        assert main([*args, "--indices", "conn", "--clusterer", "fuzzy-art"]) == 2
        assert main(["run", "--generator", "d4"]) == 2

    def test_unlabeled_cluster_by_cluster(self, small_csv):
        args = ["run", "--dataset", str(small_csv), "--rho", "0.5", "--no-labels"]
        assert main([*args, "--indices", "ch"]) == 2

    def test_data_error(self, write_csv, tmp_path):
        bad = write_csv("0.1,0.2,1\n0.3,abc,2\n")
        args = ["--rho", "0.5", "--indices", "ch"]
        assert main(["run", "--dataset", str(bad), *args]) == 3
        missing = tmp_path / "missing.csv"
        assert main(["run", "--dataset", str(missing), *args]) == 3

    def test_unknown_index(self):
        with pytest.raises(SystemExit):
            main(["run", "--generator", "d4", "--rho", "0.5", "--indices", "abc"])

    def test_batch_eval(self, small_csv, tmp_path):
        output = tmp_path / "values.csv"
        assert main(["batch-eval", str(small_csv), "--output", str(output)]) == 0
        frame = pd.read_csv(output)
        kinds = [str(k) for k in IndexKind if k is not IndexKind.CONN]
        assert frame["index"].tolist() == kinds

    def test_batch_eval_labels(self, small, small_csv, tmp_path):
        labels = tmp_path / "labels.csv"
        labels.write_text(
            "\n".join(str(label) for label in small.labels) + "\n", encoding="utf-8"
        )
        output = tmp_path / "values.csv"
        args = ["batch-eval", str(small_csv), "--labels", str(labels)]
        assert main([*args, "--textbook", "--output", str(output)]) == 0
        frame = pd.read_csv(output).set_index("index")
        assert frame.loc["ari", "value"] == pytest.approx(1.0)

    def test_batch_eval_label_count(self, small_csv, tmp_path):
        labels = tmp_path / "labels.csv"
        labels.write_text("1\n2\n", encoding="utf-8")
        args = ["batch-eval", str(small_csv), "--labels", str(labels)]
        assert main(args) == 3

    def test_batch_eval_unlabeled(self, write_csv):
        path = write_csv("0.1,0.2\n0.3,0.4\n0.5,0.1\n")
        assert main(["batch-eval", str(path), "--no-labels"]) == 2

    def test_sweep(self, small_csv, tmp_path):
        summary, records = tmp_path / "sweep.json", tmp_path / "series.csv"
        code = main(
            [
                "sweep-conn",
                "--dataset",
                str(small_csv),
                "--rho",
                "0.5",
                "--points",
                "8",
                "--maximum",
                "0.9",
                "--workers",
                "2",
                "--summary",
                str(summary),
                "--records",
                str(records),
            ]
        )
        assert code == 0
        report = json.loads(summary.read_text(encoding="utf-8"))
        assert len(report["points"]) == 8
        assert report["rho"] == 0.5
        series = pd.read_csv(records)
        assert series["rho_a"].nunique() == 8
