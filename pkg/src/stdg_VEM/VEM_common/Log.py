# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import logging

ROOT = "stdg"


def get_log(name: str = "") -> logging.Logger:
    return logging.getLogger(f"{ROOT}.{name}" if name else ROOT)


def configure(verbosity: int = 0) -> None:
    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(format="%(asctime)s %(levelname)-7s %(name)s: %(message)s",
                        level=logging.WARNING)
    get_log().setLevel(level)
