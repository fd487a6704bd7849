# gnls.py - command-line entry point
import sys

from dotenv import load_dotenv

from cli.commands import main

load_dotenv()

if __name__ == "__main__":
    sys.exit(main())
