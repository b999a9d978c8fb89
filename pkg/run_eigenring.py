"""
eigenring - polygon transformations and rings of coupled quantum wells.

This script loads the environment and runs one eigenring subcommand, for example

    python run_eigenring.py polygon --random 6 --seed 7 --theta 1.2566 decompose
    python run_eigenring.py well --L 1 --V0 800 --l 6
    python run_eigenring.py map --theta-frac 2 5 --h11 -0.83662 --h12 -0.47397
"""
import sys

from dotenv import load_dotenv

from eigenring.cli import main as run_cli


def main():
    """Run the eigenring command line."""
    # Load environment variables (EIGENRING_*)
    load_dotenv()
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
