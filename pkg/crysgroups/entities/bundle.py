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

"""Bundle entities: group specs, representations, cocycles, crystallographic
group bundles."""

from typing import Any, Dict, List, Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field

from .certificate import Certificate
from .matrix import MatrixPayload


Family = Literal["cyclic", "bicyclic", "alternating"]


class GroupSpec(BaseModel):
    """
    Identifies a holonomy group.

    `factors` lists (p_i, n_i) for the cyclic family; `p` is the prime of the
    bicyclic family C_p x C_p; the alternating family takes no parameters.
    `strict` turns on the extra exponent constraints of the composite cyclic
    construction.
    """

    family: Family
    factors: List[Tuple[int, int]] = Field(default_factory=list)
    p: Optional[int] = None
    strict: bool = False
    model_config = ConfigDict(from_attributes=True)


class Provenance(BaseModel):
    """
    Records which builder produced a representation and with what inputs.
    """

    family: str
    params: Dict[str, Any] = Field(default_factory=dict)
    model_config = ConfigDict(from_attributes=True)


class RepresentationPayload(BaseModel):
    """
    Represents an integral representation by its generator images.
    """

    group: GroupSpec
    degree: int
    images: Dict[str, MatrixPayload]
    ring_marker: str = "Z"
    provenance: Provenance
    coprime_ok: bool = True
    model_config = ConfigDict(from_attributes=True)


class CocyclePayload(BaseModel):
    """
    Represents a 1-cocycle by its generator values modulo the lattice.
    """

    rep: str = "representation"
    gen_values: Dict[str, List[str]]
    model_config = ConfigDict(from_attributes=True)


class BundleSpec(BaseModel):
    """
    Parameters of one shipped crystallographic family.

    cyclic: `factors` and `m`; bicyclic: `p` and `n` (n may be 0);
    alternating: `n` (at least 1).
    """

    family: Family
    factors: List[Tuple[int, int]] = Field(default_factory=list)
    m: int = 1
    p: Optional[int] = None
    n: int = 0
    model_config = ConfigDict(from_attributes=True)


class BundlePayload(BaseModel):
    """
    Represents a crystallographic group Crys(G; M; T) with its certificates.
    """

    spec: BundleSpec
    dimension: int
    non_split: Optional[bool] = None
    seed: int
    representation: RepresentationPayload
    cocycle: CocyclePayload
    certificates: List[Certificate] = Field(default_factory=list)
    model_config = ConfigDict(from_attributes=True)

    def to_json(self) -> str:
        """
        Converts the bundle to deterministic JSON.

        Returns:
            JSON string with four-space indentation.
        """
        return self.model_dump_json(indent=4)
