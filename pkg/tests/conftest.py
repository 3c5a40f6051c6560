"""
MahlerChamp - Shared test fixtures

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import pytest

from mahlerchamp.construct import ConstructionConfig, init_stage


@pytest.fixture(scope="session")
def stage_one():
    """Stage 1 for exp with two fixed points then one 2-cycle requested."""
    return init_stage(ConstructionConfig(sigma={1: 2, 2: 1}))


@pytest.fixture
def fresh_stage(stage_one):
    """A copy that a test may modify."""
    return stage_one.copy()
