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

"""Configuration module for crysgroups."""

import os
import logging
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import BaseModel, Field


logger = logging.getLogger(__name__)


class SearchSettings(BaseModel):
    """Limits and seeds for the randomized and exhaustive searches."""

    seed: int = Field(default=20250101)
    primitive_element_tries: int = Field(default=200)
    exhaustive_idempotent_limit: int = Field(default=2**20)
    exhaustive_chunk: int = Field(default=1 << 14)


class OracleSettings(BaseModel):
    """When independent cross-checks run."""

    max_degree: int = Field(default=60)
    random_cocycle_trials: int = Field(default=100)


class Config(BaseSettings):
    """Configuration settings for crysgroups."""

    model_config = SettingsConfigDict(
        env_file=os.path.join(
            os.path.dirname(os.path.abspath(__file__)), "../.env"
        ),
        env_prefix="CRYS_",
        case_sensitive=True,
        extra="ignore",
    )
    search_settings: SearchSettings = Field(default=SearchSettings())
    oracle_settings: OracleSettings = Field(default=OracleSettings())
    app_name: str = "crysgroups"
    WORK_DIR: str = Field(default=".")
    LOG_LEVEL: str = Field(default="WARNING")
    LOG_TO_FILE: bool = Field(default=False)
    DET_MAX_DEGREE: int = Field(default=120)

    def resolve(self, path: str) -> str:
        """Resolves a relative artifact path against WORK_DIR."""
        if os.path.isabs(path):
            return path
        return os.path.join(self.WORK_DIR, path)
