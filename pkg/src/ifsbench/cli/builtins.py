"""Built-in experiments reproducing the classical examples."""

from __future__ import annotations

from typing import Dict

from .config import SCHEMA, ExperimentConfig, config_from_dict

CIRCLE = {"type": "circle"}


def _affine(n, rot="0"):
    return {"type": "circle-affine", "multiplier": n, "rotation": rot}


def _base(name, maps, subshift=None, streams=None, points=None, tasks=(), space=CIRCLE, alphabet=2):
    return {"schema": SCHEMA, "name": name, "alphabet": alphabet,
            "subshift": subshift or {"type": "full", "alphabet": alphabet}, "space": space,
            "maps": maps, "streams": streams or {}, "points": points or {}, "seed": 0,
            "tasks": list(tasks)}


def shadowing_ex36():
    # x -> 2x and the identity; shadowing holds along 0-tails, not along 1-tails
    return _base(
        "shadowing-ex36", {"0": _affine(2), "1": _affine(1)},
        streams={"zeros": {"type": "periodic", "period": "0"},
                 "ones": {"type": "periodic", "period": "1"}},
        tasks=[
            {"op": "check_shadowing", "label": "0-tail, 100 random pseudo-orbits",
             "params": {"stream": "zeros", "eps": "0.011", "method": "backward", "count": 100,
                        "pseudo_orbit": {"kind": "random", "x0": "1/7", "delta": "0.01",
                                         "length": 200, "seed": 0}},
             "expect": "pass"},
            {"op": "check_shadowing", "label": "1-tail, drifting pseudo-orbit",
             "params": {"stream": "ones", "eps": "0.1", "method": "grid", "grid": 1000,
                        "pseudo_orbit": {"kind": "drift", "step": "0.005", "length": 200,
                                         "delta": "0.01"}},
             "expect": "fail"},
        ])


def exactness_ex312():
    # identity and doubling; exact along the transitive point once the
    # seventh 1 has been read (index 17 of the enumeration), never along 0s
    U = [["1/3", "67/192"]]
    return _base(
        "exactness-ex312", {"0": _affine(1), "1": _affine(2)},
        streams={"t": {"type": "transitive"}, "zeros": {"type": "periodic", "period": "0"}},
        tasks=[
            {"op": "probe_mixing", "label": "exact along t after 7 ones",
             "params": {"stream": "t", "U": U, "mode": "exact", "N": 18, "horizon": 64},
             "expect": "pass"},
            {"op": "probe_mixing", "label": "exact along 0^inf",
             "params": {"stream": "zeros", "U": U, "mode": "exact", "N": 1, "horizon": 64},
             "expect": "fail"},
        ])


def weakperiodic_ex44():
    tasks = [{"op": "detect_periodicity", "label": "weak returns",
              "params": {"stream": "ladder", "point": "x", "kind": "weakly", "horizon": 600},
              "expect": "pass"}]
    tasks += [{"op": "detect_periodicity", "label": f"periodic({p})",
               "params": {"stream": "ladder", "point": "x", "kind": "periodic", "p": p,
                          "horizon": 600},
               "expect": "fail"} for p in range(1, 17)]
    return _base("weakperiodic-ex44", {"0": _affine(1, "2θ"), "1": _affine(1, "-θ")},
                 streams={"ladder": {"type": "ladder", "pattern": [[0, 1], [1, 2]]}},
                 points={"x": "1/7"}, tasks=tasks)


def morse_ex49():
    sample = {"random": 256, "denominator": 1009}
    return _base(
        "morse-ex49", {"0": _affine(1, "θ"), "1": _affine(1, "-θ")},
        subshift={"type": "substitution", "alphabet": 2, "rules": {"0": "01", "1": "10"}, "seed": 0},
        streams={"m": {"type": "morse"}},
        tasks=[
            {"op": "detect_periodicity", "label": "regularly(2) on 256 points",
             "params": {"stream": "m", "points": sample, "kind": "regularly", "p": 2, "horizon": 1024}},
            {"op": "detect_periodicity", "label": "periodic(2) on 256 points",
             "params": {"stream": "m", "points": sample, "kind": "periodic", "p": 2, "horizon": 1024}},
        ])


def spec_remark33():
    space = {"type": "finite", "points": ["a", "b"]}
    spec = {"points": ["b", "a"], "pairs": [[0, 0], [1, 3]], "gap": 1}
    return _base(
        "spec-remark33", {"0": {"type": "finite-map", "table": {"a": "a", "b": "a"}}},
        subshift={"type": "full", "alphabet": 1}, space=space, alphabet=1,
        streams={"s": {"type": "periodic", "period": "0"}},
        tasks=[
            {"op": "check_specification", "params": {"stream": "s", "eps": "1/2", "spec": spec},
             "expect": "pass"},
            {"op": "check_ssp", "params": {"stream": "s", "eps": "1/2",
                                           "spec": {"points": ["a", "b"], "pairs": [[0, 0], [1, 3]],
                                                    "gap": 1}},
             "expect": "pass"},
            {"op": "estimate_spec_constant", "params": {"stream": "s", "eps": "1/2", "trials": 20},
             "expect": "pass"},
            {"op": "is_surjective", "label": "surjectivity (cannot be dropped)", "params": {},
             "expect": "fail"},
            {"op": "probe_mixing", "label": "mixing has no meaning on interval sets here",
             "params": {"stream": "s", "U": [["0", "1"]], "V": [["0", "1"]]}, "expect": "error"},
        ])


def rotation_square_closing():
    return _base(
        "rotation-square-closing", {"0": _affine(1, "θ"), "1": _affine(2)},
        streams={"ones": {"type": "periodic", "period": "1"},
                 "zeros": {"type": "periodic", "period": "0"},
                 "t": {"type": "transitive"}},
        points={"x": "1/3"},
        tasks=[
            {"op": "detect_periodicity", "label": "1/3 along 1^inf",
             "params": {"stream": "ones", "point": "x", "kind": "periodic", "p": 2, "horizon": 64},
             "expect": "pass"},
            {"op": "detect_periodicity", "label": "1/3 along 0^inf",
             "params": {"stream": "zeros", "point": "x", "kind": "weakly", "horizon": 64},
             "expect": "fail"},
            {"op": "transfer_periodic_transitive", "label": "no periodic point along t",
             "params": {"t": "t", "sigma": "ones", "point": "x", "p": 2, "horizon": 64},
             "expect": "error"},
        ])


def promotion_sft():
    return _base(
        "promotion-sft", {"0": _affine(1, "θ"), "1": _affine(1, "-θ")},
        subshift={"type": "sft", "alphabet": 2, "forbidden": ["11"]},
        streams={"s": {"type": "periodic", "period": "01"},
                 "s3": {"type": "periodic", "period": "011"}},
        points={"x": "1/5"},
        tasks=[
            {"op": "promote_periodic_sft", "label": "golden mean, rotations",
             "params": {"sigma": "s", "point": "x", "p": 2, "horizon": 64}, "expect": "pass"},
            {"op": "promote_periodic_sft", "label": "inflation branch (p < M)",
             "subshift": {"type": "sft", "alphabet": 2, "forbidden": ["111"]},
             "maps": {"0": _affine(1), "1": _affine(2)},
             "params": {"sigma": "s3", "point": "0", "p": 1, "horizon": 64}, "expect": "pass"},
        ])


EVEN_SHIFT = {"type": "sofic", "alphabet": 2,
              "graph": {"vertices": ["a", "b", "c"],
                        "edges": [["a", "a", 1], ["a", "b", 0], ["b", "a", 0],
                                  ["a", "c", 1], ["c", "a", 1], ["c", "b", 0]]}}


def promotion_sofic():
    return _base(
        "promotion-sofic", {"0": _affine(1), "1": _affine(1, "1/2")},
        subshift=EVEN_SHIFT,
        streams={"s": {"type": "periodic", "period": "1001"}, "m": {"type": "morse"}},
        points={"x": "1/7"},
        tasks=[
            {"op": "fischer_cover", "params": {}, "expect": "pass"},
            {"op": "promote_periodic_sofic", "label": "even shift",
             "params": {"sigma": "s", "point": "x", "p": 4, "horizon": 128}, "expect": "pass"},
            {"op": "promote_periodic_sofic", "label": "Morse cover is not sofic",
             "subshift": {"type": "morse-cover", "vertex_horizon": 64}, "alphabet": 3,
             "maps": {"0": _affine(1, "θ"), "1": _affine(1, "-θ"), "2": _affine(1)},
             "params": {"sigma": "m", "point": "0", "p": 2, "horizon": 64}, "expect": "error"},
        ])


BUILTINS = {
    "shadowing-ex36": shadowing_ex36,
    "exactness-ex312": exactness_ex312,
    "weakperiodic-ex44": weakperiodic_ex44,
    "morse-ex49": morse_ex49,
    "spec-remark33": spec_remark33,
    "rotation-square-closing": rotation_square_closing,
    "promotion-sft": promotion_sft,
    "promotion-sofic": promotion_sofic,
}


def builtin_config(name: str) -> ExperimentConfig:
    try:
        return config_from_dict(BUILTINS[name]())
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
