"""
Check the installed packages against ``requirements.txt``::

    python -m todalab.check_dependencies
"""
import os
import sys

import pkg_resources

from todalab.logx import log

dir_path = os.path.dirname(os.path.realpath(__file__))


def missing_requirements():
    with open(os.path.join(dir_path, 'requirements.txt'), 'r') as f:
        requirements = [line.strip() for line in f.read().splitlines() if line.strip()]
    problems = []
    for req in requirements:
        try:
            pkg_resources.require([req])
        except Exception as e:
            problems.append(f'{req}: {e}')
    return problems


def main():
    log('Checking dependencies...', color='cyan')
    problems = missing_requirements()
    for problem in problems:
        log(problem, color='red')
    if not problems:
        log('All dependencies are satisfied')
    return 1 if problems else 0


if __name__ == '__main__':
    sys.exit(main())
