#!/usr/bin/env python3
# Run the script like this: python main.py <group> <command> [flags].
#
# For example: python main.py bound thm1 --n 2 --d 1 --s 1 --primes 3
from primebound.cli import main

if __name__ == "__main__":
    main()
