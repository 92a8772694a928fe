"""Writes the hand-encoded model and spec documents under fixtures/."""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def model(actions, labels, states, initial, edges):
    return {
        "kind": "model",
        "version": 1,
        "model": {
            "action_props": sorted(actions),
            "label_props": sorted(labels),
            "states": [{"id": s, "labels": sorted(l)} for s, l in states],
            "initial": initial,
            "transitions": [{"from": f, "guard": g, "to": t} for f, g, t in edges],
        },
    }


def spec(name, ltl):
    return {"kind": "spec", "version": 1, "name": name, "ltl": ltl}


MODELS = {
    # Pedestrian crossing with a traffic light that may turn red while the agent waits.
    "crossroad_light": model(
        ["locate traffic light", "approach pedestrian crossing", "look way", "cross road"],
        ["traffic light", "green", "car come", "goal"],
        [("p0", ["traffic light", "green"]), ("p1", ["green", "car come"]), ("p2", ["green"]),
         ("p3", []), ("p4", ["goal"]), ("p5", ["green"])],
        "p0",
        [("p0", "approach_pedestrian_crossing", "p1"), ("p0", "!approach_pedestrian_crossing", "p0"),
         ("p1", "look_way", "p2"), ("p1", "look_way", "p3"), ("p1", "!look_way", "p1"),
         ("p2", "cross_road", "p4"), ("p2", "!cross_road & eps", "p3"), ("p2", "!cross_road", "p2"),
         ("p3", "cross_road", "p5"), ("p3", "eps", "p2"), ("p3", "!cross_road", "p3"),
         ("p4", "true", "p4"), ("p5", "true", "p5")]),
    # The agent must look left and right before the goal counts as reached.
    "crossroad": model(
        ["face direction", "look left", "look right", "look way", "cross road"],
        ["traffic light", "car come", "pass", "goal"],
        [("p0", []), ("p1", []), ("p2", []), ("p3", ["goal"])],
        "p0",
        [("p0", "!look_left & !look_right", "p0"), ("p0", "look_left", "p1"), ("p0", "look_right", "p2"),
         ("p1", "look_right", "p3"), ("p1", "!look_right", "p1"),
         ("p2", "look_left", "p3"), ("p2", "!look_left", "p2"),
         ("p3", "true", "p3")]),
    # Rebooting modem and router; each power-up needs a two minute wait.
    "wifi": model(
        ["unplug modem", "turn off router", "plug in modem", "turn on router", "observe modem indicator",
         "monitor router indicator", "confirm internet connectivity"],
        ["goal", "2 min"],
        [("p0", []), ("p1", []), ("p2", []), ("p3", ["2 min"]), ("p4", []), ("p5", []),
         ("p6", ["2 min", "goal"])],
        "p0",
        [("p0", "!unplug_modem", "p0"), ("p0", "unplug_modem", "p1"),
         ("p1", "plug_in_modem", "p2"), ("p1", "!plug_in_modem", "p1"),
         ("p2", "eps", "p3"), ("p2", "!eps", "p5"),
         ("p3", "!turn_on_router", "p3"), ("p3", "turn_on_router", "p4"),
         ("p4", "eps", "p6"), ("p4", "!eps", "p5"),
         ("p5", "true", "p5"), ("p6", "true", "p6")]),
}

SPECS = {
    "crossroad_light": spec("phi1", "traffic_light & G F (green & !car_come) -> F goal"),
    "crossroad": spec("phi2", "!traffic_light -> F goal"),
    "wifi": spec("reach_goal", "F goal"),
}

for name, doc in MODELS.items():
    (ROOT / "models" / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
for name, doc in SPECS.items():
    (ROOT / "specs" / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
