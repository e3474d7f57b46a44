"""Scratch: trainability probe for the projector on synthetic features."""

import math
import sys

sys.path.insert(0, "src")
import numpy as np

from scenesplat.scene_model.scenario import AgentKind
from scenesplat.temporal_alignment.codebook import (
    default_location_codebook,
    default_pedestrian_motion_codebook,
    default_vehicle_motion_codebook,
)
from scenesplat.temporal_alignment.features import KinematicFeatures
from scenesplat.temporal_alignment.projector import embed_trajectory
from scenesplat.temporal_alignment.training import (
    TrainingConfig,
    TrainingExample,
    train_projectors,
)

DEG = math.pi / 180

SECTORS = {
    "front": 0.0, "front-left": 45 * DEG, "left": 90 * DEG,
    "rear-left": 135 * DEG, "behind": 170 * DEG, "rear-right": -135 * DEG,
    "right": -90 * DEG, "front-right": -45 * DEG,
}


def vehicle_feat(rng, motion):
    v = rng.uniform(4, 10)
    if motion == "stationary":
        net, var, ms, v0, v1, plen, st = 0, 0, rng.uniform(0, 0.2), 0, 0, 0, 0
    elif motion == "straight":
        net, var = rng.normal(0, 2 * DEG), abs(rng.normal(0, 3 * DEG))
        ms, v0, v1 = v, v, v
        plen, st = v * 8, 1.0
    elif motion == "turn-left":
        net = rng.uniform(80, 100) * DEG
        var, ms, v0, v1, plen, st = net, v, v, v, v * 8, 0.9
    elif motion == "turn-right":
        net = -rng.uniform(80, 100) * DEG
        var, ms, v0, v1, plen, st = -net, v, v, v, v * 8, 0.9
    elif motion == "u-turn":
        net = rng.uniform(170, 180) * DEG
        var, ms, v0, v1, plen, st = net, v, v, v, v * 8, 0.5
    elif motion == "stopping":
        net, var = 0, 0
        v0, v1, ms = v, 0.0, v / 2
        plen, st = v * 4, 1.0
    elif motion == "starting":
        net, var = 0, 0
        v0, v1, ms = 0.0, v, v / 2
        plen, st = v * 4, 1.0
    return net, var, ms, v0, v1, plen, st


def make_example(rng, motion, sector, kind=AgentKind.VEHICLE):
    bearing = SECTORS[sector] + rng.normal(0, 2 * DEG)
    rng_m = rng.uniform(12, 35)
    if kind == AgentKind.VEHICLE:
        net, var, ms, v0, v1, plen, st = vehicle_feat(rng, motion)
        disp_bearing = rng.uniform(-170 * DEG, 170 * DEG)
    else:
        v = rng.uniform(1.0, 1.8)
        disp_bearing = rng.uniform(-170 * DEG, 170 * DEG)
        if motion == "standing":
            net, var, ms, v0, v1, plen, st = 0, 0, 0.05, 0.05, 0.05, 0.1, 0
        elif motion == "walking-straight":
            net, var, ms, v0, v1, plen, st = 0, 0, v, v, v, v * 8, 1.0
            disp_bearing = rng.uniform(-30 * DEG, 30 * DEG)
        elif motion == "crossing-left-to-right":
            net, var, ms, v0, v1, plen, st = 0, 0, v, v, v, v * 8, 1.0
            disp_bearing = -90 * DEG + rng.normal(0, 10 * DEG)
        elif motion == "crossing-right-to-left":
            net, var, ms, v0, v1, plen, st = 0, 0, v, v, v, v * 8, 1.0
            disp_bearing = 90 * DEG + rng.normal(0, 10 * DEG)
        elif motion == "stopping":
            net, var, ms, v0, v1, plen, st = 0, 0, v / 2, v + 0.5, 0.1, v * 4, 1.0
    feat = KinematicFeatures(net, var, ms, v0, v1, plen, st,
                             disp_bearing, bearing, rng_m)
    return TrainingExample(feat, motion, sector, kind)


def main():
    rng = np.random.default_rng(7)
    vm = default_vehicle_motion_codebook()
    pm = default_pedestrian_motion_codebook()
    loc = default_location_codebook()
    vmotions = [p.name for p in vm.prototypes]
    pmotions = [p.name for p in pm.prototypes]
    sectors = list(SECTORS)

    train, test = [], []
    for i in range(200):
        if i % 3 == 0:
            m = pmotions[i % len(pmotions)]
            k = AgentKind.PEDESTRIAN
        else:
            m = vmotions[i % len(vmotions)]
            k = AgentKind.VEHICLE
        train.append(make_example(rng, m, sectors[i % 8], k))
    for i in range(50):
        if i % 3 == 0:
            m = pmotions[(i * 2) % len(pmotions)]
            k = AgentKind.PEDESTRIAN
        else:
            m = vmotions[(i * 2) % len(vmotions)]
            k = AgentKind.VEHICLE
        test.append(make_example(rng, m, sectors[(i * 3) % 8], k))

    cfg = TrainingConfig(learning_rate=0.05, epochs=300, batch_size=16, seed=7)
    res = train_projectors(train, {"vehicle": vm, "pedestrian": pm}, loc, cfg)
    print("final losses:", {k: round(v[-1], 4) for k, v in res.loss_curves.items()},
          "initial:", {k: round(v[0], 4) for k, v in res.loss_curves.items()})

    def agree(examples):
        okm = okl = 0
        for ex in examples:
            book = vm if ex.family == "vehicle" else pm
            z = embed_trajectory(ex.features, res.projectors[ex.family])
            sims_m = book.matrix() @ z
            sims_l = loc.matrix() @ z
            if book.names[int(np.argmax(sims_m))] == ex.motion_label:
                okm += 1
            if loc.names[int(np.argmax(sims_l))] == ex.location_label:
                okl += 1
        return okm / len(examples), okl / len(examples)

    print("train agreement (motion, location):", agree(train))
    print("test  agreement (motion, location):", agree(test))


if __name__ == "__main__":
    main()
