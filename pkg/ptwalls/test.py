# flake8: noqa
import sys

import ptwalls.scenarios
from ptwalls.cli import main

if __name__ == '__main__':
    # python ptwalls/test.py -opt options/chain_3_3.yml
    sys.exit(main(['report'] + sys.argv[1:]))
