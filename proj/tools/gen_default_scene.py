#!/usr/bin/env python3
"""Regenerates scenes/default.json.

Each arm is an XYZ stage followed by a three-axis wrist and a straight
instrument. Base poses are solved so that, at q_init, every instrument
passes through its port on the eye sphere and ends at the requested tip.
"""

import json
import math
import sys

import numpy as np
from scipy.spatial.transform import Rotation

EYE_RADIUS = 12.0
PORT_POLAR = math.radians(30.0)
TOOL_LENGTH = 30.0
STAGE_RANGE = 40.0
WRIST_RANGE = 0.6
HALF_PI = math.pi / 2

# (type, theta, d, a, alpha)
JOINTS = [
    ("prismatic", 0.0, 0.0, 0.0, -HALF_PI),
    ("prismatic", -HALF_PI, 0.0, 0.0, -HALF_PI),
    ("prismatic", 0.0, 0.0, 0.0, 0.0),
    ("revolute", 0.0, 0.0, 0.0, -HALF_PI),
    ("revolute", 0.0, 0.0, 0.0, HALF_PI),
    ("revolute", 0.0, 0.0, 0.0, 0.0),
]
Q_INIT = [0.0, 0.0, 0.0, 0.0, HALF_PI, 0.0]
RANGES = [STAGE_RANGE] * 3 + [WRIST_RANGE, WRIST_RANGE, math.pi]


def dh(theta, d, a, alpha):
    ct, st, ca, sa = math.cos(theta), math.sin(theta), math.cos(alpha), math.sin(alpha)
    return np.array([[ct, -st * ca, st * sa, a * ct],
                     [st, ct * ca, -ct * sa, a * st],
                     [0.0, sa, ca, d],
                     [0.0, 0.0, 0.0, 1.0]])


def local_tool_pose(q):
    T = np.eye(4)
    for (kind, theta, d, a, alpha), qk in zip(JOINTS, q):
        if kind == "revolute":
            theta += qk
        else:
            d += qk
        T = T @ dh(theta, d, a, alpha)
    tool = np.eye(4)
    tool[2, 3] = TOOL_LENGTH
    return T @ tool


def quaternion(R):
    x, y, z, w = Rotation.from_matrix(R).as_quat()
    return [w, x, y, z]


def robot(name, port, tip):
    port = np.asarray(port, float)
    tip = np.asarray(tip, float)
    l = (tip - port) / np.linalg.norm(tip - port)
    y = np.array([0.0, 1.0, 0.0])
    y = y - y.dot(l) * l
    y /= np.linalg.norm(y)
    R_tool = np.column_stack([np.cross(y, l), y, l])
    local = local_tool_pose(Q_INIT)
    R_base = R_tool @ local[:3, :3].T
    t_base = tip - R_base @ local[:3, 3]
    joints = []
    for (kind, theta, d, a, alpha), q0, rng in zip(JOINTS, Q_INIT, RANGES):
        joints.append({"type": kind, "theta": theta, "d": d, "a": a, "alpha": alpha,
                       "lower": q0 - rng, "upper": q0 + rng})
    return {
        "name": name,
        "tool_length": TOOL_LENGTH,
        "base": {"rotation": [round(v, 15) for v in quaternion(R_base)],
                 "translation": [round(v, 12) for v in t_base]},
        "joints": joints,
        "q_init": Q_INIT,
    }


def main(path):
    s, c = math.sin(PORT_POLAR), math.cos(PORT_POLAR)
    scene = {
        "eye": {"radius": EYE_RADIUS},
        "robots": [
            robot("needle", [EYE_RADIUS * s, 0.0, EYE_RADIUS * c], [0.0, 0.0, -8.0]),
            robot("light_guide", [-EYE_RADIUS * s, 0.0, EYE_RADIUS * c], [-3.0, 0.0, 2.0]),
        ],
        "controller": {"beta": 0.99, "eta": 140.0, "lambda": 0.001},
        "light_guide_target": "hold",
        "dt": 0.004,
        "fundus_depth": -8.0,
        "settle": {"tolerance": 0.01, "max_time": 10.0, "ramp_time": 4.0},
        "constraints": {
            "tip_in_eye": {"enabled": True, "margin": 0.5},
            "light_guide_retina": {"enabled": True, "clearance": 2.0},
            "safety_gain": 1.0,
            "fixed_rcm": {"tolerance": 0.005, "gain": 250.0},
            "orbital": {"d_safe": 0.5, "gain": 0.1},
            "rotation_limits": {"enabled": True, "gain": 1.0, "d_rot": EYE_RADIUS / 2,
                                "normal_robot1": [1.0, 0.0, 0.0],
                                "normal_robot2": [-1.0, 0.0, 0.0]},
            "joint_limits": {"enabled": True, "gain": 1.0},
        },
    }
    with open(path, "w") as f:
        json.dump(scene, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "scenes/default.json")
