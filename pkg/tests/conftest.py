import sys
from pathlib import Path

# the brute-force references live next to the tests
sys.path.insert(0, str(Path(__file__).parent))
