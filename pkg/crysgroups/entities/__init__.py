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

"""Pydantic entities shared by the library and the command line."""

from .bundle import (
    BundlePayload,
    BundleSpec,
    CocyclePayload,
    GroupSpec,
    Provenance,
    RepresentationPayload,
)
from .certificate import Certificate, CertificateKind, CertificateReport
from .command import CommandSpec
from .matrix import CycloPayload, MatrixPayload


__all__ = [
    "BundlePayload",
    "BundleSpec",
    "Certificate",
    "CertificateKind",
    "CertificateReport",
    "CocyclePayload",
    "CommandSpec",
    "CycloPayload",
    "GroupSpec",
    "MatrixPayload",
    "Provenance",
    "RepresentationPayload",
]
