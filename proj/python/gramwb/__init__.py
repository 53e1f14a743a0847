# Copyright 2026 The gramwb Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Grammar workbench: checks, parsers, test suites and result comparison."""

from ._core import GramwbError, Session, compare_results, run_cli, unify

__all__ = ["GramwbError", "Session", "compare_results", "run_cli", "unify"]

# args is (kind, message).
GramwbError.kind = property(lambda self: self.args[0])
GramwbError.message = property(lambda self: self.args[1] if len(self.args) > 1 else "")
GramwbError.__str__ = lambda self: f"{self.message} [{self.kind}]"
