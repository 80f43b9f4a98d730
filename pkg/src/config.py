"""Configuration settings for the discern driving decision engine."""

import os
from typing import Dict, List, Tuple

# Repository layout
REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CATALOG_DIR = os.path.join(REPO_ROOT, 'catalog')
OVERLAY_DIR = os.path.join(CATALOG_DIR, 'overlays')
SCENARIO_DIR = os.path.join(REPO_ROOT, 'scenarios')

# File extensions
RULES_EXTENSION = '.rules'
SCENARIO_EXTENSION = '.scn'

# Shipped catalog files, loaded in this order (one file per layer)
CATALOG_LAYERS: Dict[str, str] = {
    'candidate': 'candidates.rules',
    'derived-scene': 'scene.rules',
    'default': 'defaults.rules',
    'exception': 'exceptions.rules',
    'mitigation': 'mitigation.rules',
    'suggestion': 'suggestions.rules',
    'constraint': 'constraints.rules',
}

# Stopping-distance model: speed * reaction_time + speed^2 / (2 * deceleration)
DEFAULT_REACTION_TIME = 1.0   # seconds
DEFAULT_DECELERATION = 6.0    # meters / second^2

# Flashing-light detection over the trailing frames (one frame per second)
FLASHING_WINDOW = 8
FLASHING_MIN_CHANGES = 4

# Engine limits
MAX_SEARCH_DEPTH = 200

# Closed vocabularies
ACTIONS: Tuple[str, ...] = (
    'accelerate', 'brake', 'cruise', 'change_lane_left', 'change_lane_right',
    'turn_left', 'turn_right',
)

INTENTS: Tuple[str, ...] = (
    'continue_in_lane', 'stay_in_leftmost_lane', 'merge_into_left_lane',
    'merge_into_right_lane', 'enter_right_lane', 'enter_left_lane',
    'stop_at_destination',
)

OBJECT_CLASSES: Tuple[str, ...] = (
    'car', 'truck', 'bus', 'pedestrian', 'cyclist', 'bicycle', 'bike',
    'motorcycle', 'traffic_cone', 'debris', 'animal', 'barrier',
)

# Classes the in-lane safety guarantee is stated for
ROAD_USER_CLASSES: Tuple[str, ...] = (
    'car', 'truck', 'bus', 'pedestrian', 'cyclist', 'bicycle', 'bike', 'motorcycle',
)

LOCATION_CLASSES: Tuple[str, ...] = ('city', 'road', 'residential', 'campus')
TRAFFIC_LIGHTS: Tuple[str, ...] = ('none', 'red', 'yellow', 'green')
TRAFFIC_SIGNS: Tuple[str, ...] = ('stop', 'yield', 'merge', 'speed_limit')
INTERSECTION_KINDS: Tuple[str, ...] = ('four_way', 't_junction_major', 't_junction_minor')
SIGNALING: Tuple[str, ...] = ('signalized', 'unsignalized')
INTERSECTION_POSITIONS: Tuple[str, ...] = ('approaching', 'at')
SENSOR_SIDES: Tuple[str, ...] = ('left', 'right', 'front', 'rear')
OFFROAD_LANE = 'offroad'

# Arbitration: earlier wins. Turns tie and never co-occur (intent-gated).
ARBITRATION_ORDER: Tuple[str, ...] = (
    'turn_left', 'turn_right', 'change_lane_left', 'change_lane_right',
    'brake', 'accelerate', 'cruise',
)
FALLBACK_ACTION = 'cruise'

# Which turn wins when both are suggested
TURN_PREFERENCE: Dict[str, str] = {
    'enter_left_lane': 'turn_left',
    'enter_right_lane': 'turn_right',
}

# Scene facts emitted per frame (name -> arity), in serialization order
FACT_SCHEMA: List[Tuple[str, int]] = [
    ('self_speed', 2),
    ('self_lane', 2),
    ('lanes', 2),
    ('speed_limit', 2),
    ('location', 2),
    ('intent', 2),
    ('traffic_light', 2),
    ('traffic_sign', 2),
    ('intersection', 4),
    ('arrival_rank', 2),
    ('sensor', 3),
    ('self_pred_path', 2),
    ('obj', 2),
    ('class', 2),
    ('obj_lane', 3),
    ('obj_distance', 3),
    ('obj_rel_speed', 3),
    ('obj_pred_path', 3),
]

# Scenario facts every frame must state
MANDATORY_FRAME_FACTS: Tuple[str, ...] = ('self_speed', 'self_lane', 'lanes', 'intent')

# Latency budgets per frame, milliseconds
DEFAULT_AVG_BUDGET_MS = 450.0
DEFAULT_MAX_BUDGET_MS = 900.0
DEFAULT_BENCH_REPETITIONS = 10

# Process exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_STRATIFICATION_ERROR = 2
EXIT_ENGINE_ERROR = 3
EXIT_BUDGET_EXCEEDED = 4
EXIT_LINT_FAILURE = 5
