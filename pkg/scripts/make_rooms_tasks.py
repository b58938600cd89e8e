"""Write the rooms-and-boxes task files (both goal variants) into tests/data/."""

import json
from pathlib import Path

from epikc.planner import KNOWS_WHETHER_GOAL, STRICT_GOAL, rooms_task_json

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"


def main():
    OUT.mkdir(exist_ok=True)
    for name, goal in (("rooms_knows_whether.json", KNOWS_WHETHER_GOAL), ("rooms_strict.json", STRICT_GOAL)):
        (OUT / name).write_text(json.dumps(rooms_task_json(goal), indent=2) + "\n")
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    main()
