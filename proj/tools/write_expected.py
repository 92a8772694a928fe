"""Writes hand-transcribed expected controllers under fixtures/expected/.

Each document holds a controller plus an alias table mapping the phrases used
in the transcription onto the phrases the builder produces, for the few
labels that were abbreviated or worded differently.
"""
import json
import pathlib
import re

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "expected"

T = "true"


def ident(phrase):
    return phrase.replace(" ", "_")


def expected(name, note, states, initial, absorbing, edges, aliases=None):
    props, actions = set(), set()
    transitions = []
    for src, cond, act, dst in edges:
        props.update(p.replace("_", " ") for p in re.findall(r"[A-Za-z][A-Za-z0-9_]*", cond)
                     if p not in ("true", "false"))
        out = [act] if act else []
        actions.update(out)
        transitions.append({"from": src, "cond": cond, "out": out, "to": dst})
    return name, {
        "kind": "expected",
        "version": 1,
        "name": name,
        "note": note,
        "aliases": aliases or {},
        "controller": {
            "props": sorted(props),
            "actions": sorted(actions),
            "states": [{"id": s, "step": None} for s in states],
            "initial": initial,
            "absorbing": absorbing,
            "transitions": transitions,
        },
    }


DOCS = [
    expected(
        "crossroad_merged", "both crossing scenarios joined under the traffic light branch",
        ["q0", "q11", "q12", "q21", "q22", "q23", "q3"], "q0", "q3",
        [("q0", "!traffic_light", None, "q11"),
         ("q0", "traffic_light", None, "q21"),
         ("q11", T, "look way", "q12"),
         ("q12", "!car_come | car_pass", "cross road", "q3"),
         ("q12", "car_come & !car_pass", None, "q12"),
         ("q21", T, "locate traffic light", "q22"),
         ("q22", "turn_green", "look ways", "q23"),
         ("q22", "!turn_green", None, "q22"),
         ("q23", "!car_come", "cross road", "q3"),
         ("q23", "car_come", None, "q23"),
         ("q3", T, None, "q3")],
        {"car pass": "pass", "look ways": "look way", "turn green": "green"}),
    expected(
        "crossroad_substeps", "crossing without a light after one round of substeps",
        ["q11", "q12", "q13", "q14", "q21", "q22", "q23", "q31", "q32", "q4"], "q11", "q4",
        [("q11", T, "face direction", "q12"),
         ("q12", T, "look left", "q13"),
         ("q13", T, "look right", "q14"),
         ("q14", "!car_come", None, "q21"),
         ("q14", "car_come", None, "q31"),
         ("q21", T, "cross road", "q22"),
         ("q22", T, "look way", "q23"),
         ("q23", "car_come", None, "q11"),
         ("q23", "!car_come", None, "q4"),
         ("q31", "!pass", None, "q31"),
         ("q31", "pass", None, "q32"),
         ("q32", T, None, "q21"),
         ("q4", T, None, "q4")]),
    expected(
        "dental_layered", "dentist task with two layers of substeps spliced in",
        ["q1", "q2", "q3", "q4", "q5", "q11", "q12", "q13", "q131", "q132", "q133"], "q1", "q5",
        [("q1", T, None, "q11"),
         ("q11", T, "online search", "q12"),
         ("q12", T, "gather recommendation", "q13"),
         ("q13", T, None, "q131"),
         ("q131", T, "get contact info", "q132"),
         ("q132", T, "call insurance", "q133"),
         ("q133", T, "request a list", "q2"),
         ("q2", T, "read review", "q3"),
         ("q3", T, "compare", "q4"),
         ("q4", T, "schedule", "q5"),
         ("q5", T, None, "q5")],
        {"online search": "search local clinic",
         "get contact info": "get insurance provider",
         "call insurance": "call insurance provider",
         "request a list": "request list",
         "compare": "compare service",
         "schedule": "schedule appointment"}),
    expected(
        "mpc_layered", "multi-party computation with substeps of steps 2 and 3 spliced in",
        ["q1", "q2", "q21", "q22", "q3", "q31", "q32", "q33", "q34", "q4", "q5", "q6", "q7"], "q1", "q7",
        [("q1", T, "define problem", "q2"),
         ("q2", T, None, "q21"),
         ("q21", T, "generate share", "q22"),
         ("q22", T, "store share", "q3"),
         ("q3", T, None, "q31"),
         ("q31", T, "encrypt share", "q32"),
         ("q32", T, "distribute share", "q33"),
         ("q33", T, "compute ciphertext", "q34"),
         ("q34", T, "broadcast result", "q4"),
         ("q4", T, "reconstruct result", "q5"),
         ("q5", T, "output verification", "q6"),
         ("q6", T, "decrypt result", "q7"),
         ("q7", T, None, "q7")]),
    expected(
        "crossroad_light_initial", "first controller for crossing at a traffic light",
        ["q1", "q2", "q3", "q4"], "q1", "q4",
        [("q1", T, "locate traffic light", "q2"),
         ("q2", "!turn_green", None, "q2"),
         ("q2", "turn_green", "look way", "q3"),
         ("q3", "car_come", None, "q3"),
         ("q3", "!car_come", "cross road", "q4"),
         ("q4", T, None, "q4")],
        {"turn green": "green"}),
    expected(
        "crossroad_light_manual1", "after adding the approach action",
        ["q1", "q2", "q3", "q4"], "q1", "q4",
        [("q1", T, "approach pedestrian crossing", "q2"),
         ("q2", "!turn_green", None, "q2"),
         ("q2", "turn_green", "look way", "q3"),
         ("q3", "car_come", None, "q3"),
         ("q3", "!car_come", "cross road", "q4"),
         ("q4", T, None, "q4")],
        {"turn green": "green"}),
    expected(
        "crossroad_light_manual2", "after requiring green and no cars before crossing",
        ["q1", "q2", "q3", "q4"], "q1", "q4",
        [("q1", T, "approach pedestrian crossing", "q2"),
         ("q2", "!turn_green", None, "q2"),
         ("q2", "turn_green", "look way", "q3"),
         ("q3", "car_come | !turn_green", None, "q3"),
         ("q3", "turn_green & !car_come", "cross road", "q4"),
         ("q4", T, None, "q4")],
        {"turn green": "green"}),
    expected(
        "crossroad_initial", "first controller for crossing without a light",
        ["q1", "q2", "q3"], "q1", "q3",
        [("q1", T, "look way", "q2"),
         ("q2", "!car_come | car_pass", "cross road", "q3"),
         ("q2", "car_come & !car_pass", None, "q2"),
         ("q3", T, None, "q3")],
        {"car pass": "pass"}),
    expected(
        "crossroad_pruned", "crossing without a light after refinement and pruning",
        ["q1", "q11", "q12", "q2", "q3"], "q1", "q3",
        [("q1", T, "face direction", "q11"),
         ("q11", T, "look left", "q12"),
         ("q12", T, "look right", "q2"),
         ("q2", "!car_come | car_pass", "cross road", "q3"),
         ("q2", "car_come & !car_pass", None, "q2"),
         ("q3", T, None, "q3")],
        {"car pass": "pass"}),
    expected(
        "wifi_initial", "first controller for rebooting the modem and router",
        ["q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8"], "q1", "q8",
        [("q1", T, "unplug modem power", "q2"),
         ("q2", T, "disconnect router power", "q3"),
         ("q3", T, "reconnect modem power", "q4"),
         ("q4", T, "observe modem indicator", "q5"),
         ("q5", T, "reconnect router power", "q6"),
         ("q6", T, "observe router indicator", "q7"),
         ("q7", T, "confirm internet", "q8"),
         ("q8", T, None, "q8")],
        {"observe router indicator": "monitor router indicator",
         "confirm internet": "confirm internet connectivity"}),
]


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    for name, doc in DOCS:
        (ROOT / f"{name}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
