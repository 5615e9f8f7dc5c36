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


"""Heterogeneous graph motion prediction."""

import json

from . import _core
from ._core import (
    Error,
    Graph,
    Scene,
    SyntheticSpec,
    build_graph,
    compute_metrics,
    generate_synthetic,
    load_scenes,
    normalize_scene,
    save_scenes,
)

__all__ = [
    "Error",
    "Graph",
    "Model",
    "Scene",
    "SyntheticSpec",
    "build_graph",
    "compute_metrics",
    "default_config",
    "evaluate",
    "generate_synthetic",
    "load_scenes",
    "normalize_scene",
    "save_scenes",
    "train",
]


def default_config():
    """Run configuration with every field at its default."""
    return json.loads(_core.default_config())


def _dump(config):
    return json.dumps(config or {})


class Model:
    """Predictor wrapping the native model; `config` is a run configuration dict."""

    def __init__(self, config=None, seed=0, _native=None):
        self.config = json.loads(_core.check_config(_dump(config)))
        self._native = _native if _native is not None else _core.Model(_dump(self.config), seed)

    @classmethod
    def load(cls, config, checkpoint):
        native = _core.Model.load(_dump(config), str(checkpoint))
        return cls(config, _native=native)

    def save(self, path):
        self._native.save(str(path))

    @property
    def num_parameters(self):
        return self._native.num_parameters

    def forward(self, graph):
        """Returns (trajectories [A, K, T_f, 2], scores [A, K]) in the local frame."""
        return self._native.forward(graph)


def train(config, train_scenes, val_scenes=()):
    """Trains a fresh model; returns (Model, per-epoch log dicts)."""
    native, log = _core.train(_dump(config), list(train_scenes), list(val_scenes))
    return Model(config, _native=native), log


def evaluate(model, scenes):
    """Returns ([(scene_id, metrics)], aggregate metrics)."""
    return _core.evaluate(model._native, _dump(model.config), list(scenes))
