# src/chains/manifest.py
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from core.files import file_digest

logger = logging.getLogger("cyclewalk.chains")

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """What was launched: resolved per-chain configs and the graph they ran on"""

    graph: str
    graph_digest: str
    chains: int
    output_dir: str
    configs: list = field(default_factory=list)

    @classmethod
    def for_launch(cls, configs):
        first = configs[0]
        return cls(
            graph=first.graph,
            graph_digest=file_digest(first.graph),
            chains=len(configs),
            output_dir=first.out,
            configs=[cfg.as_dict() for cfg in configs],
        )

    def as_dict(self):
        return {
            "graph": self.graph,
            "graph_digest": self.graph_digest,
            "chains": self.chains,
            "output_dir": self.output_dir,
            "configs": self.configs,
        }

    def write(self, directory=None):
        path = Path(directory or self.output_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info(f"Wrote manifest for {self.chains} chain(s) to {path}")
        return path

    @classmethod
    def read(cls, path):
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**data)

    def digest_matches(self):
        return file_digest(self.graph) == self.graph_digest
