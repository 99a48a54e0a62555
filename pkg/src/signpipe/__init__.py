"""signpipe: compile English task instructions into ASL gloss video playlists."""

__version__ = "0.1.0"

from .errors import SignpipeError
from .gloss import Gloss, GlossKind, GlossSequence, Provenance, normalize, validate_sequence
from .manifest import CompoundTable, SynonymTable, VideoAsset, VideoManifest, VideoSource
from .resolver import (
    CompiledTask,
    Playlist,
    ResolutionKind,
    ResolvedGloss,
    ResolverOptions,
    compile_task,
    resolve_gloss,
    resolve_step,
    stitch,
)
from .ruletrans import Lexicon, Pos, PosFilterPolicy, RuleTranslator, rule_translate
from .tasks import Domain, IngredientLine, InstructionStep, TaskSpec, load_tasks, validate_collection

__all__ = [
    "__version__", "SignpipeError",
    "Gloss", "GlossKind", "GlossSequence", "Provenance", "normalize", "validate_sequence",
    "CompoundTable", "SynonymTable", "VideoAsset", "VideoManifest", "VideoSource",
    "CompiledTask", "Playlist", "ResolutionKind", "ResolvedGloss", "ResolverOptions",
    "compile_task", "resolve_gloss", "resolve_step", "stitch",
    "Lexicon", "Pos", "PosFilterPolicy", "RuleTranslator", "rule_translate",
    "Domain", "IngredientLine", "InstructionStep", "TaskSpec", "load_tasks", "validate_collection",
]
