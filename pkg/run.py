# run.py
#!/usr/bin/env python3
"""
Simple script to run the mini-minkowski CLI from a source checkout
Place this in the project root directory
"""

import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
