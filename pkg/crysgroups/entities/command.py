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
"""Command entity module."""

from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field

from .bundle import BundleSpec


Verb = Literal["build", "verify", "report", "oracle"]


class CommandSpec(BaseModel):
    """
    Represents one validated command line invocation.

    `bundle` carries the family parameters for build and oracle; `source`
    is the bundle or report file read by verify and report.
    """

    verb: Verb
    bundle: Optional[BundleSpec] = None
    source: Optional[str] = None
    checks: List[str] = Field(default_factory=list)
    out: Optional[str] = None
    oracle: Optional[bool] = None
    seed: int = 0
    certify: bool = False
    trials: int = 100
    model_config = ConfigDict(from_attributes=True)
