from .command import (
    ActionKind,
    ActionParams,
    AssetParams,
    EditCommand,
    GroupSelector,
    TaskKind,
    format_command,
    parse_command,
)
from .assets import (
    AssetRecord,
    default_asset_bank,
    load_asset_bank,
    retrieve_asset,
    save_asset_bank,
)
from .motion import resolve_anchor_position, synthesize_trajectory
from .apply import EditResult, apply_edit
from .llm_bridge import translate_freeform

__all__ = [
    "TaskKind",
    "ActionKind",
    "GroupSelector",
    "AssetParams",
    "ActionParams",
    "EditCommand",
    "parse_command",
    "format_command",
    "AssetRecord",
    "default_asset_bank",
    "load_asset_bank",
    "save_asset_bank",
    "retrieve_asset",
    "resolve_anchor_position",
    "synthesize_trajectory",
    "EditResult",
    "apply_edit",
    "translate_freeform",
]
