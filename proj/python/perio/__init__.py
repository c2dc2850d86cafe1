# Copyright 2026 The Perio Authors
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

"""Python access to the perio C++ core.

Corpora are JSONL strings in the same format the command-line tool reads and
writes. Records are dicts with the keys status, stage, grade, extent and
subtype.
"""

from perio._perio import (
    ConfigError,
    DataError,
    FormatError,
    PerioError,
    TransportError,
    adjudicate,
    classify_guideline,
    evaluate,
    extract,
    generate_offline,
    learning_curve,
    normalize_value,
    predict,
    select_templates,
    split,
    tokenize,
)

__all__ = [
    "ConfigError",
    "DataError",
    "FormatError",
    "PerioError",
    "TransportError",
    "adjudicate",
    "classify_guideline",
    "evaluate",
    "extract",
    "generate_offline",
    "learning_curve",
    "normalize_value",
    "predict",
    "select_templates",
    "split",
    "tokenize",
]
