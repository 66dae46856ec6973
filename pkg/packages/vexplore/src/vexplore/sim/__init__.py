"""Simulated world: scenes, kinematics, depth sensing and the vSLAM surrogate."""

from vexplore.geometry import Pose

from .generator import SceneGenSpec, generate_corpus, generate_scene
from .io import list_scenes, load_scene, load_scenes, save_scene
from .kinematics import step_kinematics
from .scene import LARGE_SCENE_AREA, Scene
from .sensor import DepthCorruption, DepthMode, DepthScan, SensorParams, sense
from .slam import (
    SlamParams,
    SlamSurrogateState,
    Tracking,
    new_slam_state,
    relocalize,
    scan_overlap,
    slam_update,
)

__all__ = [
    "LARGE_SCENE_AREA",
    "DepthCorruption",
    "DepthMode",
    "DepthScan",
    "Pose",
    "Scene",
    "SceneGenSpec",
    "SensorParams",
    "SlamParams",
    "SlamSurrogateState",
    "Tracking",
    "generate_corpus",
    "generate_scene",
    "list_scenes",
    "load_scene",
    "load_scenes",
    "new_slam_state",
    "relocalize",
    "save_scene",
    "scan_overlap",
    "sense",
    "slam_update",
    "step_kinematics",
]
