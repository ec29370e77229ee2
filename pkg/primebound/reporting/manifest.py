import hashlib
import json
import os
from dataclasses import asdict, dataclass, field

from primebound.errors import PreconditionError


def digest(text):
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass
class RunManifest:
    """
    Sidecar record of one run: enough to replay it and to check that the
    replay printed the same bytes.
    """

    subcommand: str
    argv: list
    parameters: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    outputs: str = ""
    records: int = 0
    exit_code: int = 0
    wall_time: float = 0.0

    @property
    def filename(self):
        return "{}-{}.json".format(self.subcommand.replace(" ", "-"), self.outputs[:12])

    def to_dict(self):
        return asdict(self)

    def write(self, directory):
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, self.filename)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    @classmethod
    def read(cls, path):
        try:
            with open(path) as f:
                data = json.load(f)
            return cls(**data)
        except (OSError, ValueError, TypeError) as e:
            raise PreconditionError("cannot read manifest {}: {}".format(path, e)) from e
