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

"""Logging setup for the command line front end."""

import logging
import os
import sys
from datetime import datetime


class ImmediateFlushingStreamHandler(logging.StreamHandler):
    """Stream handler that flushes after every record."""

    def emit(self, record):
        super().emit(record)
        self.flush()


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(
    level: str | None = None, log_dir: str | None = None
) -> logging.Logger:
    """Configures the root logger once per process.

    Args:
        level: Level name. Falls back to the LOG_LEVEL environment variable
            and then to WARNING, so command output stays clean by default.
        log_dir: When set, records are also appended to a dated file in
            this directory.

    Returns:
        The package logger.
    """
    level = (level or os.environ.get("LOG_LEVEL", "WARNING")).upper()
    handlers: list[logging.Handler] = [
        ImmediateFlushingStreamHandler(sys.stderr)
    ]
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handlers.append(
            logging.FileHandler(
                os.path.join(
                    log_dir,
                    f"crysgroups_{datetime.now().strftime('%Y%m%d')}.log",
                ),
                mode="a",
            )
        )
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    logger = logging.getLogger("crysgroups")
    logger.debug("Logging system initialized at %s", level)
    return logger
