# Copyright 2026 The hetpred Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import numpy as np
import pytest

import hetpred


def small_spec(scenes=2):
    spec = hetpred.SyntheticSpec()
    spec.scenes = scenes
    spec.agents = 3
    spec.lanes = 2
    spec.t_obs = 4
    spec.t_f = 5
    return spec


def small_config(epochs=2):
    cfg = hetpred.default_config()
    cfg["model"].update(hidden=8, heads=2, modes=2, t_f=5, n_agent_layers=4)
    cfg["optim"].update(epochs=epochs, batch_size=2)
    return cfg


def test_synthetic_is_deterministic():
    a = hetpred.generate_synthetic(small_spec(), 3)
    b = hetpred.generate_synthetic(small_spec(), 3)
    assert [s.to_json() for s in a] == [s.to_json() for s in b]
    assert a[0].num_tracks == 3
    assert a[0].t_obs == 4


def test_scene_file_round_trip(tmp_path):
    scenes = hetpred.generate_synthetic(small_spec(), 4)
    path = tmp_path / "scenes.jsonl"
    hetpred.save_scenes(str(path), scenes)
    loaded = hetpred.load_scenes(str(path))
    assert [s.to_json() for s in loaded] == [s.to_json() for s in scenes]


def test_load_missing_file_raises():
    with pytest.raises(hetpred.Error):
        hetpred.load_scenes("/nonexistent/scenes.jsonl")


def test_graph_edges_carry_relative_positions():
    scene = hetpred.normalize_scene(hetpred.generate_synthetic(small_spec(1), 5)[0])
    graph = hetpred.build_graph(scene)
    assert graph.num_agent_nodes == 3 * 4
    assert graph.num_tracks == 3
    assert graph.num_map_nodes == scene.num_segments
    assert graph.relations()
    for name in graph.relations():
        src, dst, feats = graph.edges(name)
        assert src.shape == dst.shape
        assert feats.shape == (src.shape[0], 2)
    with pytest.raises(KeyError):
        graph.edges("no-such-relation")


def test_forward_shapes():
    scene = hetpred.normalize_scene(hetpred.generate_synthetic(small_spec(1), 6)[0])
    model = hetpred.Model(small_config(), seed=1)
    traj, scores = model.forward(hetpred.build_graph(scene))
    assert traj.shape == (3, 2, 5, 2)
    assert scores.shape == (3, 2)
    assert np.all(np.isfinite(traj))
    assert model.num_parameters > 0


def test_metrics_zero_for_exact_prediction():
    gt = np.arange(2 * 3 * 2, dtype=float).reshape(2, 3, 2)
    pred = np.stack([gt + 5.0, gt], axis=1)
    report = hetpred.compute_metrics(pred, gt, [True, True])
    assert report["minADE"] == 0.0
    assert report["minJFDE"] == 0.0
    assert hetpred.compute_metrics(pred, gt, [False, False]) is None


def test_invalid_config_raises():
    cfg = small_config()
    cfg["model"]["heads"] = 3
    with pytest.raises(hetpred.Error):
        hetpred.Model(cfg, seed=0)
    with pytest.raises(hetpred.Error):
        hetpred.Model({"unknown": 1}, seed=0)


def test_train_then_checkpoint_round_trip(tmp_path):
    scenes = hetpred.generate_synthetic(small_spec(4), 7)
    cfg = small_config(epochs=3)
    model, log = hetpred.train(cfg, scenes, scenes)
    assert [row["epoch"] for row in log] == [0, 1, 2]
    assert all(row["validation"] is not None for row in log)
    path = tmp_path / "checkpoint.bin"
    model.save(path)
    loaded = hetpred.Model.load(cfg, path)
    per_scene, aggregate = hetpred.evaluate(model, scenes)
    assert len(per_scene) == 4
    assert hetpred.evaluate(loaded, scenes)[1] == aggregate
    assert aggregate == log[-1]["validation"]
