#!/usr/bin/env python3
"""
NLOS Link - Entry Point
"""
from nlos_link.cli import main

if __name__ == "__main__":
    main()
