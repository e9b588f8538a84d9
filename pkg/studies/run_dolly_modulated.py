"""Script to simulate red-2 and red-4 under Dolly slowdowns."""

import logging
import os
import sys

from pyredlab.config_file import ConfigFile
from pyredlab.experiments import sweep_mean_jobs, write_csv

logging.basicConfig(level=logging.INFO)

here = os.path.dirname(os.path.abspath(__file__))
spec = ConfigFile.load(os.path.join(here, "dolly_modulated.json")).sweep
write_csv(sweep_mean_jobs(spec, threads=2), stream=sys.stdout)
