"""Run the steinforge command line with `python -m steinforge`."""

from .cli import main

raise SystemExit(main())
