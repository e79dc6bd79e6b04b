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

"""Exception hierarchy raised by the crysgroups library and mapped to exit
codes by the command line front end."""


class CrysError(Exception):
    """Base class for every error raised by crysgroups."""


class DomainError(CrysError):
    """An operation received entries from the wrong coefficient domain."""


class ShapeError(CrysError):
    """Matrix or vector dimensions do not compose."""


class NotInvertibleError(CrysError):
    """An element or matrix has no inverse in its ring."""


class ParameterError(CrysError):
    """A builder or command received parameters outside its hypotheses.

    Attributes:
        hypothesis: short statement of the violated hypothesis, shown to
            the user verbatim.
    """

    def __init__(self, message: str, hypothesis: str | None = None):
        super().__init__(message)
        self.hypothesis = hypothesis or message


class CocycleError(CrysError):
    """Generator values do not extend to a 1-cocycle.

    Attributes:
        relation: name of the defining relation that failed.
        residue: fractional residue left by the relation, as strings.
    """

    def __init__(self, relation: str, residue: list[str]):
        super().__init__(
            f"not a cocycle: relation {relation} violated, residue {residue}"
        )
        self.relation = relation
        self.residue = residue


class CertificationRefused(CrysError):
    """A certificate cannot be issued because its hypothesis fails."""


class OracleMismatchError(CrysError):
    """Two independent decision procedures disagreed."""


class ComputationError(CrysError):
    """A bounded search finished without reaching a decision."""
