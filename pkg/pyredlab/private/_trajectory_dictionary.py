"""_Trajectory Dictionary Class.

This class defines the trajectory dictionary class, that is used to
collect time series in the runner and the fluid solver. It inherits from
dictionary (column name -> list of values, all of equal length) and its
aim is to have an extra save function, so that writing results is easily
done by the user."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import csv
import json
import pickle
from pathlib import Path

from ..util.formatting import format_number, rounded


FILE_VERSION = 0.2
"""version tag written into json and pickle files"""


class TrajectoryDictionary(dict):
    """Trajectory Dictionary Class.

    Inherits from dict. Keys are column names in insertion order, values
    are lists of numbers."""

    def __init__(self, columns=()):
        super().__init__((column, []) for column in columns)

    @property
    def columns(self):
        return list(self.keys())

    @property
    def num_rows(self):
        """number of rows"""
        for values in self.values():
            return len(values)
        return 0

    def append(self, *values):
        """Append one row, one value per column."""
        assert len(values) == len(self.keys()), \
            "expected {} values, got {}".format(len(self.keys()), len(values))
        for column, value in zip(self.keys(), values):
            super().__getitem__(column).append(value)

    def rows(self):
        """iterate over rows as tuples"""
        return zip(*self.values())

    def to_csv(self, stream):
        """Write a CSV with a header row to an open text stream."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows():
            writer.writerow([format_number(value) for value in row])

    def save(self,
             *,
             filename,
             path='./',
             data_type='csv'):
        """Save function.

        Use this to save a trajectory in some format.

        Parameters
        ----------
        filename: string
            name of the file saved, without extension
        path: string
            path or directory to save to
        data_type: string
            'csv', 'json' or 'pickle'
        Returns
        -------
        pathlib.Path
            the written file
        """
        directory = Path(path)
        if data_type == 'csv':
            save_name = directory / (filename + '.csv')
            with open(save_name, 'w', newline='') as dumpfile:
                self.to_csv(dumpfile)
        elif data_type == 'json':
            save_name = directory / (filename + '.json')
            dict_to_save = rounded(dict(self))
            dict_to_save['file-version'] = FILE_VERSION
            with open(save_name, 'w') as dumpfile:
                json.dump(dict_to_save, dumpfile)
        elif data_type == 'pickle':
            save_name = directory / (filename + '.pickle')
            dict_to_save = dict(self)
            dict_to_save['file-version'] = FILE_VERSION
            with open(save_name, 'wb') as dumpfile:
                pickle.dump(dict_to_save, dumpfile, pickle.HIGHEST_PROTOCOL)
        else:
            raise ValueError("unknown data_type {!r}".format(data_type))
        return save_name
