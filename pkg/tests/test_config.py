"""Tests for scenario configuration validation."""
import copy

import pytest

from nlos_link.core.coverage import is_connected
from nlos_link.core.location_mgmt import Adjacency
from nlos_link.simulator.config import RoomConfig, load_config, load_script, parse_config
from nlos_link.errors import ConfigError


def broken(data, mutate):
    data = copy.deepcopy(data)
    mutate(data)
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    return exc.value


class TestDemoConfig:

    def test_loads(self, demo_config):
        assert isinstance(demo_config, RoomConfig)
        assert [n.node_id for n in demo_config.nodes] == ["alice", "bob"]
        assert demo_config.grid.adjacency is Adjacency.FOUR
        assert demo_config.seed == 42

    def test_grid(self, demo_config):
        grid = demo_config.build_grid()
        assert (grid.rows, grid.cols, grid.cell_size) == (4, 4, 1.0)
        assert grid.reporting == frozenset({(0, 1), (1, 1), (2, 1), (3, 1)})

    def test_default_beam_covers_cells(self, demo_config):
        beam = demo_config.build_beam()
        receiver = demo_config.build_receiver()
        assert beam.beam_radius_W == pytest.approx(1.0)
        assert is_connected(beam, receiver, 2 ** 0.5 / 2)

    def test_configured_beam_wins(self, demo_data):
        demo_data["optics"].update(launch_power=0.5, beam_radius=2.0)
        beam = parse_config(demo_data).build_beam()
        assert (beam.launch_power_P, beam.beam_radius_W) == (0.5, 2.0)

    def test_default_group(self, demo_config):
        assert demo_config.public_params().n.bit_length() == 2048

    def test_config_hash(self, demo_config, demo_data):
        assert len(demo_config.config_hash()) == 16
        assert demo_config.config_hash() == parse_config(demo_data).config_hash()
        demo_data["seed"] = 43
        assert parse_config(demo_data).config_hash() != demo_config.config_hash()

    def test_with_seed(self, demo_config):
        assert demo_config.with_seed(None) is demo_config
        assert demo_config.with_seed(7).seed == 7
        assert demo_config.seed == 42


class TestValidation:

    def test_two_receivers(self, demo_data):
        error = broken(demo_data, lambda d: d["ultrasonic"]["receivers"].pop())
        assert error.field_path == "ultrasonic.receivers"
        assert "at least 3 non-collinear" in str(error)

    def test_collinear_receivers(self, demo_data):
        def mutate(d):
            d["ultrasonic"]["receivers"][2].update(x=2.0, y=0.0)
        error = broken(demo_data, mutate)
        assert "collinear" in str(error)

    def test_duplicate_receiver_ids(self, demo_data):
        error = broken(demo_data, lambda d: d["ultrasonic"]["receivers"][1].update(receiver_id="u1"))
        assert error.field_path == "ultrasonic.receivers"

    def test_grid_must_cover_room(self, demo_data):
        error = broken(demo_data, lambda d: d["room"].update(height=5.0))
        assert error.field_path == "grid.rows"

    def test_reporting_cell_out_of_range(self, demo_data):
        error = broken(demo_data, lambda d: d["reporting_cells"].append([4, 0]))
        assert error.field_path == "reporting_cells.4"

    def test_node_too_fast(self, demo_data):
        error = broken(demo_data, lambda d: d["nodes"][0].update(speed=1.5))
        assert error.field_path == "nodes.0.speed"

    def test_node_outside_room(self, demo_data):
        error = broken(demo_data, lambda d: d["nodes"][1].update(start=[4.5, 1.0]))
        assert error.field_path == "nodes.1.start"

    def test_waypoint_outside_room(self, demo_data):
        error = broken(demo_data, lambda d: d["nodes"][0].update(waypoints=[[1.0, 1.0], [9.0, 1.0]]))
        assert error.field_path == "nodes.0.waypoints.1"

    def test_duplicate_node(self, demo_data):
        error = broken(demo_data, lambda d: d["nodes"][1].update(node_id="alice"))
        assert error.field_path == "nodes.1.node_id"

    def test_composite_modulus(self, demo_data):
        error = broken(demo_data, lambda d: d["crypto"].update(n=21, g=2))
        assert error.field_path == "crypto.n"

    def test_base_out_of_range(self, demo_data):
        error = broken(demo_data, lambda d: d["crypto"].update(n=23, g=30))
        assert error.field_path == "crypto.g"

    def test_modulus_without_base(self, demo_data):
        error = broken(demo_data, lambda d: d["crypto"].update(n=23))
        assert error.field_path == "crypto.n"

    def test_unsupported_hash(self, demo_data):
        error = broken(demo_data, lambda d: d["crypto"].update(hash="md5"))
        assert error.field_path == "crypto.hash"

    def test_unknown_field(self, demo_data):
        error = broken(demo_data, lambda d: d["room"].update(depth=3.0))
        assert error.field_path == "room.depth"

    def test_missing_section(self, demo_data):
        error = broken(demo_data, lambda d: d.pop("ultrasonic"))
        assert error.field_path == "ultrasonic"

    def test_negative_noise(self, demo_data):
        error = broken(demo_data, lambda d: d["noise"].update(tof_sigma=-1.0))
        assert error.field_path == "noise.tof_sigma"

    def test_small_group(self, demo_data):
        demo_data["crypto"] = {"n": 23, "g": 5}
        params = parse_config(demo_data).public_params()
        assert (params.n, params.g) == (23, 5)


class TestFiles:

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "absent.json"))

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{room:", encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config(str(path))

    def test_script(self, demo_requests):
        assert len(demo_requests) == 1
        request = demo_requests[0]
        assert (request.tick, request.src, request.dst) == (4, "bob", "alice")

    def test_script_default_message(self, write_json):
        requests = load_script(write_json("script.json", [{"tick": 2, "src": "a", "dst": "b"}]))
        assert requests[0].message == "secured optical link test payload"

    def test_script_must_be_list(self, write_json):
        with pytest.raises(ConfigError) as exc:
            load_script(write_json("script.json", {"tick": 1}))
        assert exc.value.field_path == "script"

    def test_script_entry_path(self, write_json):
        with pytest.raises(ConfigError) as exc:
            load_script(write_json("script.json", [{"tick": 1, "src": "a", "dst": "b"},
                                                   {"tick": 0, "src": "a", "dst": "b"}]))
        assert exc.value.field_path == "script.1.tick"
