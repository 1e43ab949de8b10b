from __future__ import annotations

from pathlib import Path

import pytest

from cablecal import presets

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def medium():
    return presets.medium_cube()


@pytest.fixture
def large():
    return presets.large_cube()


@pytest.fixture
def xl():
    return presets.xl_cube()


@pytest.fixture
def workshop():
    return presets.workshop()


@pytest.fixture
def all_designs():
    return {name: build() for name, build in presets.ALL.items()}


@pytest.fixture
def config_dir():
    return CONFIG_DIR
