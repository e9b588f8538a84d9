"""Script to print the three stability tables as CSV."""

import sys

from pyredlab.experiments import TABLE_COLUMNS, reproduce_table, write_csv

for table_id in sorted(TABLE_COLUMNS):
    print("# table", table_id)
    write_csv(reproduce_table(table_id), stream=sys.stdout,
              columns=TABLE_COLUMNS[table_id])
