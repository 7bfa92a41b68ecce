"""
Точка входа командной строки ST-DAGCN.

Пример:
    python main.py gen-synthetic --out data/synthetic
    python main.py train --manifest data/synthetic/manifest.csv --trials 10 --jobs 4 --out runs/train
    python main.py extract-dag runs/train/A_mean.csv --epsilon 0.01 --epsilon 0.015 --out runs/dag
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
