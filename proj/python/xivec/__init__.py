# Copyright 2026  Xivec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""xi-vector speaker embeddings: Gaussian-posterior pooling and metrics."""

try:
    from ._xivec import *  # noqa: F401,F403  (installed package layout)
    from ._xivec import __version__  # noqa: F401
except ImportError:  # in-tree builds put _xivec on PYTHONPATH directly
    from _xivec import *  # noqa: F401,F403
    from _xivec import __version__  # noqa: F401
