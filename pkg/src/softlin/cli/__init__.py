"""Scene-file command line front end."""

from .report import emit_report, load_report
from .scene import Scene, SceneError, dump_scene, parse_scene, parse_scene_text, scene_from_dict
from .tasks import Options, Report, TaskResult, execute

__all__ = [
    "Options", "Report", "Scene", "SceneError", "TaskResult", "dump_scene", "emit_report",
    "execute", "load_report", "parse_scene", "parse_scene_text", "scene_from_dict",
]
