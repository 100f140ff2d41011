"""Tests for the run configuration, CSV artifacts and subcommands."""
import orjson
import pytest
import yaml

from main import run
from src import __version__
from src.cli import RunConfig, cmd_bounds, cmd_design, cmd_mc, cmd_verify, load_design, read_bounds, read_csv
from src.cli.artifacts import DESIGN_COLUMNS
from src.core.errors import ConfigError

HALF_WAVELENGTH_ARRAY = [-2.5 + 0.5 * k for k in range(11)]


def write_config(path, **values):
    path.write_text(yaml.safe_dump(values), encoding='utf-8')
    return path


@pytest.fixture
def config_5db():
    return RunConfig(snr_db=5.0)


class TestRunConfig:
    """Tests for config parsing and validation."""

    def test_defaults(self):
        config = RunConfig()
        assert config.lambda_ == 1.0
        assert len(config.grid()) == 113
        assert config.snr_list == [30.0, 12.0, 10.0, 5.0, 0.0]
        assert config.budget == 11
        assert config.matroid(config.grid()) is None

    def test_yaml_keys(self, tmp_path):
        path = write_config(
            tmp_path / 'run.yaml',
            **{'lambda': 2.0, 'aperture': {'min': -1.0, 'max': 1.0}, 'grid_delta': 0.125,
               'budget': 3, 'prior': {'r': 2, 'P': 1.0, 'M_half': 50}, 'snr_db': 10,
               'constraint': {'partition': {'bin_width': 0.5, 'offset': -0.25, 'caps': 1}},
               'solver': 'lazy', 'seed': 4, 'trials': 5, 'eval_snrs_db': [0, 10]},
        )
        config = RunConfig.from_yaml(path)
        assert config.lambda_ == 2.0
        assert len(config.grid()) == 17
        assert config.snr_list == [10.0]
        matroid = config.matroid(config.grid())
        assert matroid.global_cap == 3
        assert len(matroid.bins) == 5

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.from_yaml(write_config(tmp_path / 'bad.yaml', budgett=11))

    def test_infinite_snr_rejected(self, tmp_path):
        path = tmp_path / 'inf.yaml'
        path.write_text('snr_db: .inf\n', encoding='utf-8')
        with pytest.raises(ConfigError):
            RunConfig.from_yaml(path)

    @pytest.mark.parametrize('values', [
        {'trials': 0},
        {'grid_delta': 0},
        {'budget': 0},
        {'aperture': {'min': 1.0, 'max': -1.0}},
        {'solver': 'random'},
    ])
    def test_invalid_values(self, values):
        with pytest.raises(ConfigError):
            RunConfig.from_mapping(values)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.from_yaml(tmp_path / 'missing.yaml')

    def test_config_hash(self):
        assert RunConfig().config_hash() == RunConfig().config_hash()
        assert len(RunConfig().config_hash()) == 16
        assert RunConfig(seed=1).config_hash() != RunConfig().config_hash()

    def test_overrides(self):
        config = RunConfig().with_overrides(seed=9, trials=None)
        assert config.seed == 9
        assert config.trials == 1000


class TestDesignCommand:
    """Tests for cmd_design and the design file format."""

    def test_design_file(self, tmp_path, config_5db):
        (path,) = cmd_design(config_5db, tmp_path)
        assert path.name == 'design_greedy_5dB.csv'
        frame, metadata = read_csv(path)
        assert list(frame.columns) == DESIGN_COLUMNS
        assert len(frame) == 11
        assert frame['cumulative_mi_nats'].iloc[-1] == pytest.approx(12.54, abs=0.5)
        assert float(metadata['nemhauser_bound']) == pytest.approx(19.83, abs=0.8)
        assert float(metadata['online_bound']) == pytest.approx(17.45, abs=1.0)
        assert metadata['config_hash'] == config_5db.config_hash()
        assert metadata['solver'] == 'greedy'
        assert metadata['matroid_half_bound'] == 'inapplicable'
        assert 'bin_edges' not in metadata
        assert 'tie_break' in metadata
        assert float(metadata['epsilon']) > 0
        assert not list(tmp_path.glob('*.tmp'))

    def test_high_snr_positions(self, tmp_path):
        (path,) = cmd_design(RunConfig(snr_db=30.0), tmp_path)
        frame, metadata = read_csv(path)
        assert sorted(frame['position']) == pytest.approx(HALF_WAVELENGTH_ARRAY, abs=1e-12)
        assert metadata['lemma1_lo'] == 'inapplicable'

    def test_byte_identical_reruns(self, tmp_path, config_5db):
        (first,) = cmd_design(config_5db, tmp_path / 'a')
        (second,) = cmd_design(config_5db, tmp_path / 'b')
        assert first.read_bytes() == second.read_bytes()

    def test_snr_sweep_and_partition(self, tmp_path):
        config = RunConfig(
            snr_db=[30.0, 5.0],
            constraint={'partition': {'bin_width': 0.5, 'offset': -0.25, 'caps': 1}},
        )
        paths = cmd_design(config, tmp_path)
        assert [p.name for p in paths] == ['design_matroid_greedy_30dB.csv', 'design_matroid_greedy_5dB.csv']
        model = config.model()
        matroid = config.matroid(model.grid)
        for path in paths:
            design = load_design(path, model)
            assert len(design) == 11
            assert matroid.is_independent(design.indices)

    def test_partition_footer_certificate(self, tmp_path):
        config = RunConfig(
            snr_db=5.0,
            constraint={'partition': {'bin_width': 0.5, 'offset': -0.25, 'caps': 1}},
        )
        (path,) = cmd_design(config, tmp_path)
        _, metadata = read_csv(path)
        total = float(metadata['total_mi_nats'])
        assert metadata['solver'] == 'matroid_greedy'
        assert float(metadata['guarantee_factor']) == 0.5
        assert float(metadata['matroid_half_bound']) == pytest.approx(2.0 * total, rel=1e-12)
        assert metadata['nemhauser_bound'] == 'inapplicable'
        assert metadata['nemhauser_bound_finite'] == 'inapplicable'
        edges = metadata['bin_edges'].split(';')
        assert len(edges) == 15
        assert edges[0] == '-3.75:-3.25' and edges[-1] == '3.25:3.75'
        assert metadata['bin_caps'] == ';'.join(['1'] * 15)

        values = read_bounds(cmd_bounds(config, path, tmp_path))
        assert values[('computed', 'matroid_half')] == pytest.approx(2.0 * total, rel=1e-12)
        assert values[('computed', 'nemhauser')] == 'inapplicable'

    def test_lazy_solver_matches(self, tmp_path, config_5db):
        (eager,) = cmd_design(config_5db, tmp_path)
        (lazy,) = cmd_design(config_5db.with_overrides(solver='lazy'), tmp_path)
        assert read_csv(eager)[0]['index'].tolist() == read_csv(lazy)[0]['index'].tolist()


class TestBoundsCommand:
    """Tests for cmd_bounds."""

    def test_bounds_file(self, tmp_path, config_5db):
        (design_path,) = cmd_design(config_5db, tmp_path)
        values = read_bounds(cmd_bounds(config_5db, design_path, tmp_path))
        assert values[('computed', 'nemhauser')] == pytest.approx(19.83, abs=0.8)
        assert values[('computed', 'online')] == pytest.approx(17.45, abs=1.0)
        assert ('injected', 'lemma1_lo') not in values

    def test_injected_epsilon_at_0db(self, tmp_path):
        config = RunConfig(snr_db=0.0, inject_epsilon=1e-4)
        (design_path,) = cmd_design(config, tmp_path)
        path = cmd_bounds(config, design_path, tmp_path)
        assert path.name == 'bounds_greedy_0dB.csv'
        values = read_bounds(path)
        assert values[('injected', 'lemma1_lo')] == pytest.approx(-0.45, abs=0.02)
        assert values[('injected', 'lemma1_hi')] == pytest.approx(0.47, abs=0.02)
        assert isinstance(values[('computed', 'lemma1_lo')], float)

    def test_missing_design_file(self, tmp_path, config_5db):
        with pytest.raises(ConfigError):
            cmd_bounds(config_5db, tmp_path / 'nope.csv', tmp_path)

    def test_incompatible_design_file(self, tmp_path, config_5db):
        (design_path,) = cmd_design(config_5db, tmp_path)
        other = config_5db.with_overrides(aperture={'min': -3.45, 'max': 3.5})
        with pytest.raises(ConfigError):
            cmd_bounds(other, design_path, tmp_path)


class TestMonteCarloCommand:
    """Tests for cmd_mc."""

    def test_mse_file(self, tmp_path):
        config = RunConfig(snr_db=[30.0, 5.0], eval_snrs_db=[30.0, 5.0], trials=4, seed=3)
        paths = cmd_design(config, tmp_path)
        first = cmd_mc(config, paths, tmp_path / 'one', threads=1)
        second = cmd_mc(config, paths, tmp_path / 'two', threads=3)
        assert first.read_bytes() == second.read_bytes()
        frame, metadata = read_csv(first)
        assert len(frame) == 4
        assert metadata['estimator'] == 'posterior_mean'
        assert metadata['config_hash'] == config.config_hash()
        report = (tmp_path / 'one' / 'mse_report.txt').read_text(encoding='utf-8')
        assert f"config_hash: {config.config_hash()}" in report
        assert f"tool_version: {__version__}" in report

    def test_requires_design_files(self, tmp_path):
        with pytest.raises(ConfigError):
            cmd_mc(RunConfig(), [], tmp_path)


class TestVerifyCommand:
    """Tests for cmd_verify at reduced scale."""

    def test_suites_pass(self, tmp_path):
        report = cmd_verify(RunConfig(snr_db=5.0), tmp_path, trials=50, instances=4)
        assert report['passed']
        assert set(report['suites']) == {
            'submodularity', 'monotonicity', 'incremental_consistency',
            'approximation_oracle', 'matroid_axioms', 'half_approximation',
        }
        written = orjson.loads((tmp_path / 'verify.json').read_bytes())
        assert written['passed'] is True
        assert written['tool_version'] == __version__
        assert written['config_hash'] == RunConfig(snr_db=5.0).config_hash()


class TestMain:
    """Tests for the command-line entry point."""

    def test_design_and_bounds(self, tmp_path, capsys):
        config = write_config(tmp_path / 'run.yaml', snr_db=5.0)
        assert run(['design', '--config', str(config), '--out', str(tmp_path)]) == 0
        design_path = tmp_path / 'design_greedy_5dB.csv'
        assert design_path.exists()
        assert run(['bounds', str(design_path), '--config', str(config), '--out', str(tmp_path)]) == 0
        assert 'bounds_greedy_5dB.csv' in capsys.readouterr().out

    def test_config_error_exit_code(self, tmp_path):
        config = write_config(tmp_path / 'bad.yaml', trials=0)
        assert run(['design', '--config', str(config), '--out', str(tmp_path)]) == 1

    def test_zero_noise_config_rejected(self, tmp_path):
        path = tmp_path / 'inf.yaml'
        path.write_text('snr_db: .inf\n', encoding='utf-8')
        assert run(['design', '--config', str(path), '--out', str(tmp_path)]) == 1

    def test_missing_design_exit_code(self, tmp_path):
        assert run(['bounds', str(tmp_path / 'none.csv'), '--out', str(tmp_path)]) == 1
