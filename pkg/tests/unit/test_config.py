# Copyright 2025 The crysgroups Authors
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

import logging
import os

import pytest

from crysgroups.config import Config
from crysgroups.shared_libraries.log import (
    ImmediateFlushingStreamHandler,
    setup_logging,
)


@pytest.fixture
def conf():
    configs = Config()
    return configs


def test_settings_loading(conf):
    logging.info(conf.model_dump())
    assert conf.app_name == "crysgroups"
    assert conf.search_settings.exhaustive_idempotent_limit == 2**20
    assert conf.oracle_settings.max_degree == 60
    assert conf.oracle_settings.random_cocycle_trials == 100


def test_env_override(monkeypatch):
    monkeypatch.setenv("CRYS_LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("CRYS_DET_MAX_DEGREE", "40")
    conf = Config()
    assert conf.LOG_LEVEL == "DEBUG"
    assert conf.DET_MAX_DEGREE == 40


def test_resolve(tmp_path):
    conf = Config(WORK_DIR=str(tmp_path))
    assert conf.resolve("bundle.json") == os.path.join(str(tmp_path), "bundle.json")
    absolute = str(tmp_path / "elsewhere.json")
    assert conf.resolve(absolute) == absolute


def test_setup_logging(tmp_path):
    logger = setup_logging("info", str(tmp_path))
    assert logger.name == "crysgroups"
    root = logging.getLogger()
    assert root.level == logging.INFO
    assert any(
        isinstance(h, ImmediateFlushingStreamHandler) for h in root.handlers
    )
    assert any(isinstance(h, logging.FileHandler) for h in root.handlers)
    assert list(tmp_path.iterdir())
