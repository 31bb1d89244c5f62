"""
tests/test_config.py - Lecture, validation et surcharges de configuration
"""

import json

import pytest

from errors import ParseError, UnknownKey, MissingSymbol, ConfigError
from config_loader import (parse_config, config_from_dict, apply_overrides, load_config,
                           required_symbols, SIM_DEFAULTS)

BASE_MODEL = {"r": 3.0, "a": 0.008, "d": 0.04, "p": 0.2, "q1": 0.2, "q2": 0.6,
              "E1": 2.0, "E2": 2.0, "k": 500.0, "e": 0.15}


def base(command="equilibria", **blocks):
    data = {"command": command, "model": dict(BASE_MODEL, m=0.01)}
    data.update(blocks)
    return data


class TestParse:
    def test_fixture_sweep_values(self, fixture_path):
        config = load_config(fixture_path("refuge_table.json"))
        assert config.command == "sweep"
        assert config.sweep['m_values'] == [0.010, 0.015, 0.045, 0.060, 0.075, 0.500, 0.800]
        assert config.model_params().m == 0.0

    def test_defaults_applied(self):
        config = config_from_dict(base())
        assert config.sim == SIM_DEFAULTS
        assert config.output == {'path': None, 'format': 'csv'}
        assert config.econ_params() is None
        assert config.initial_state() is None

    def test_echo_reparses_identically(self, fixture_path):
        config = load_config(fixture_path("optimal.json"))
        echo = config.to_dict()
        again = parse_config(json.dumps(echo))
        assert again.to_dict() == echo

    def test_invalid_json_reports_position(self):
        with pytest.raises(ParseError, match="ligne 2"):
            parse_config('{\n  "command": ,\n}')

    def test_unknown_symbol(self):
        data = base()
        data["model"]["q3"] = 0.5
        with pytest.raises(UnknownKey):
            config_from_dict(data)

    def test_unknown_block(self):
        with pytest.raises(UnknownKey):
            config_from_dict(base(plots={}))

    def test_unknown_command(self):
        with pytest.raises(ParseError):
            config_from_dict(base(command="plot"))

    def test_missing_symbol(self):
        data = base()
        del data["model"]["m"]
        with pytest.raises(MissingSymbol):
            config_from_dict(data)

    def test_hopf_does_not_need_m(self):
        data = base("hopf")
        del data["model"]["m"]
        assert config_from_dict(data).hopf['grid_points'] == 40

    def test_econ_required(self):
        with pytest.raises(MissingSymbol):
            config_from_dict(base("optimal"))

    def test_simulate_requires_initial(self):
        with pytest.raises(MissingSymbol):
            config_from_dict(base("simulate"))
        config = config_from_dict(base("simulate", sim={"initial": [60, 15], "t_end": 100}))
        assert config.initial_state().x == 60.0
        assert config.sim_config().t_end == 100.0

    @pytest.mark.parametrize("blocks", [
        {"sim": {"t_end": "long"}},
        {"sim": {"initial": [1.0]}},
        {"hopf": {"grid_points": 2.5}},
        {"output": {"format": "xlsx"}},
        {"check": {"seed": True}},
    ])
    def test_type_errors(self, blocks):
        with pytest.raises(ParseError):
            config_from_dict(base(**blocks))

    def test_invalid_value_is_parse_error(self):
        data = base()
        data["model"]["e"] = 1.5
        with pytest.raises(ParseError):
            config_from_dict(data)

    def test_required_symbols(self):
        assert "m" not in required_symbols("sweep")
        assert "E1" not in required_symbols("optimal")
        assert required_symbols("check") == ()

    def test_config_errors_share_base(self):
        assert issubclass(UnknownKey, ConfigError)
        assert issubclass(MissingSymbol, ConfigError)


class TestOverrides:
    def test_bare_and_dotted(self):
        data = apply_overrides(base(), ["m=0.015", "sim.t_end=500", "p1=2", "output.format=json"])
        assert data["model"]["m"] == 0.015
        assert data["sim"]["t_end"] == 500
        assert data["econ"]["p1"] == 2
        assert data["output"]["format"] == "json"

    def test_original_untouched(self):
        data = base()
        apply_overrides(data, ["m=0.5"])
        assert data["model"]["m"] == 0.01

    def test_string_fallback(self):
        assert apply_overrides({}, ["command=sweep"]) == {"command": "sweep"}

    def test_list_literal(self):
        data = apply_overrides(base(), ["sim.initial=[60, 1]"])
        assert data["sim"]["initial"] == [60, 1]

    def test_unknown_bare_key(self):
        with pytest.raises(UnknownKey):
            apply_overrides(base(), ["q3=1"])

    def test_malformed(self):
        with pytest.raises(ParseError):
            apply_overrides(base(), ["m"])

    def test_load_with_overrides(self, fixture_path):
        config = load_config(fixture_path("convergence.json"), ["sim.t_end=300", "m=0.02"])
        assert config.sim['t_end'] == 300.0
        assert config.model_params().m == 0.02

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_config(str(tmp_path / "absent.json"))
