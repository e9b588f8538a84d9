"""Script to run the W-model sweep and store rows and manifest in /tmp."""

import logging
import os

import pyredlab
from pyredlab.config_file import ConfigFile
from pyredlab.experiments import sweep_mean_jobs, write_csv, write_manifest

logging.basicConfig(level=logging.INFO)

here = os.path.dirname(os.path.abspath(__file__))
spec = ConfigFile.load(os.path.join(here, "w_model_sweep.json")).sweep

# directory to store results:
dir = "/tmp/"

rows = sweep_mean_jobs(spec)
write_csv(rows, path=dir + "w_model_sweep.csv")
write_manifest(dir + "w_model_sweep.manifest.json", spec,
               pyredlab.__version__, rows)
print("wrote", len(rows), "rows to", dir)
