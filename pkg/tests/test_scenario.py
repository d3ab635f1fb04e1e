import importlib.resources

import pytest

from regwave.errors import ParseError
from regwave.scenario import load_scenario, parse_scenario

GOOD = """
# demo network
[scenario]
name = demo
duration = 100
interval = 10

[switch]
id = s1
ports = 1, 2
server_ports = 2

[profile]
switch = s1
port = 1
base_rate = 1000
jitter = 0.1
burst = 20, 30, 2.5

[profile]
switch = s1
port = 2
base_rate = 500

[anomaly]
kind = spike
switch = s1
port = 2
t0 = 40
duration = 20
magnitude = 5
"""


def test_parse_full_scenario():
    cfg = parse_scenario(GOOD)
    assert cfg.name == "demo"
    assert cfg.duration == 100.0
    assert cfg.interval == 10.0
    assert cfg.switches["s1"].ports == (1, 2)
    assert cfg.switches["s1"].server_ports == (2,)
    assert cfg.profiles[("s1", 1)].bursts[0].multiplier == 2.5
    assert cfg.profiles[("s1", 2)].jitter == 0.0
    [(owner, anomaly)] = cfg.anomalies
    assert owner == "s1" and anomaly.kind == "spike" and anomaly.port == 2
    assert cfg.server_port_keys() == [("s1", 2)]
    switches = cfg.build_switches(seed=4)
    assert [sw.switch_id for sw in switches] == ["s1"]
    assert set(switches[0].counters) == {1, 2}


@pytest.mark.parametrize("name", ("video-42min.scn", "spike-demo.scn"))
def test_bundled_scenarios_parse(name):
    ref = importlib.resources.files("regwave") / "scenarios" / name
    with importlib.resources.as_file(ref) as path:
        cfg = load_scenario(path)
    assert cfg.interval == 10.0
    assert cfg.duration % cfg.interval == 0
    assert cfg.server_port_keys()


def line_of(error: ParseError) -> int:
    return error.line


def test_unknown_section_reports_its_line():
    with pytest.raises(ParseError) as err:
        parse_scenario("[scenario]\nname = x\nduration = 0\n[nope]\n")
    assert err.value.line == 4


def test_unknown_key_reports_its_line():
    with pytest.raises(ParseError) as err:
        parse_scenario("[scenario]\nname = x\nduration = 0\ncolor = red\n")
    assert err.value.line == 4


def test_missing_equals_is_rejected():
    with pytest.raises(ParseError) as err:
        parse_scenario("[scenario]\nname\n")
    assert err.value.line == 2


def test_missing_required_key():
    with pytest.raises(ParseError, match="duration"):
        parse_scenario("[scenario]\nname = x\n")


def test_bad_number_reports_line():
    with pytest.raises(ParseError) as err:
        parse_scenario("[scenario]\nname = x\nduration = soon\n")
    assert err.value.line == 3


def test_server_ports_must_be_ports():
    text = GOOD.replace("server_ports = 2", "server_ports = 7")
    with pytest.raises(ParseError, match="server_ports"):
        parse_scenario(text)


def test_every_port_needs_a_profile():
    text = GOOD.replace("[profile]\nswitch = s1\nport = 2\nbase_rate = 500\n", "")
    with pytest.raises(ParseError, match="without a profile"):
        parse_scenario(text)


def test_duplicate_switch_rejected():
    text = GOOD + "\n[switch]\nid = s1\nports = 1\n"
    with pytest.raises(ParseError, match="declared twice"):
        parse_scenario(text)


def test_burst_arity_checked():
    text = GOOD.replace("burst = 20, 30, 2.5", "burst = 20, 30")
    with pytest.raises(ParseError, match="burst"):
        parse_scenario(text)


def test_anomaly_must_target_a_known_port():
    text = GOOD.replace("port = 2\nt0 = 40", "port = 9\nt0 = 40")
    with pytest.raises(ParseError, match="unknown port"):
        parse_scenario(text)


def test_anomaly_magnitude_rules_surface_as_parse_errors():
    bad_spike = GOOD.replace("magnitude = 5", "magnitude = 0.5")
    with pytest.raises(ParseError, match="magnitude"):
        parse_scenario(bad_spike)
    bad_dropout = GOOD.replace("kind = spike", "kind = dropout")
    with pytest.raises(ParseError, match="magnitude"):
        parse_scenario(bad_dropout)


def test_comments_and_blank_lines_ignored():
    cfg = parse_scenario(
        "# top\n\n[scenario]  # trailing\nname = x  # inline\nduration = 0\n"
        "[switch]\nid = a\nports = 1\n[profile]\nswitch = a\nport = 1\nbase_rate = 1\n"
    )
    assert cfg.name == "x"
    assert cfg.duration == 0.0
