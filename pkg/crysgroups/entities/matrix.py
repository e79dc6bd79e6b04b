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

"""Serialized forms of exact matrices and cyclotomic elements."""

from typing import List, Optional
from pydantic import BaseModel, ConfigDict


class MatrixPayload(BaseModel):
    """
    Represents an exact matrix as row-major entry strings.
    """

    rows: int
    cols: int
    domain: str
    p: Optional[int] = None
    entries: List[str]
    model_config = ConfigDict(from_attributes=True)


class CycloPayload(BaseModel):
    """
    Represents an element of Q(xi) by coordinates in the recursive basis.
    """

    p: int
    level: int
    coords: List[str]
    model_config = ConfigDict(from_attributes=True)
