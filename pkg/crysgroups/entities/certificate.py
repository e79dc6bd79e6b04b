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

"""Certificate entity module."""

import enum
from typing import Any, Dict, List
from pydantic import BaseModel, ConfigDict, Field


class CertificateKind(str, enum.Enum):
    """Which claim a certificate decides."""

    TORSION_FREE = "TorsionFree"
    INDECOMPOSABLE = "Indecomposable"
    COCYCLE_VALID = "CocycleValid"
    DECOMPOSABLE = "Decomposable"
    SPLIT = "Split"
    RELATIONS = "Relations"
    FAITHFUL = "Faithful"
    DIMENSION = "Dimension"


class Certificate(BaseModel):
    """
    Represents a machine-checkable verdict.

    Witnesses hold JSON-ready data (matrices as MatrixPayload dumps, vectors
    as rational strings) sufficient to re-verify a positive verdict by
    substitution or multiplication.
    """

    kind: CertificateKind
    verdict: bool
    subject: str = ""
    basis: str = ""
    witnesses: Dict[str, Any] = Field(default_factory=dict)
    checked_against_oracle: bool = False
    notes: List[str] = Field(default_factory=list)
    model_config = ConfigDict(from_attributes=True)

    @property
    def passed(self) -> bool:
        """True when the verdict is the favourable outcome for its kind."""
        if self.kind in (CertificateKind.DECOMPOSABLE, CertificateKind.SPLIT):
            return not self.verdict
        return self.verdict


class CertificateReport(BaseModel):
    """
    Represents the output of one verification run.
    """

    bundle: str
    seed: int
    checks: List[str]
    certificates: List[Certificate] = Field(default_factory=list)
    model_config = ConfigDict(from_attributes=True)

    @property
    def all_passed(self) -> bool:
        return all(cert.passed for cert in self.certificates)

    def to_json(self) -> str:
        return self.model_dump_json(indent=4)
