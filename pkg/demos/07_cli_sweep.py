"""Parameter sweep through the command-line interface, read back as CSV."""

# %%
import csv
import io
import subprocess
import sys

cmd = [sys.executable, "-m", "frachardy", "constant", "b", "--N", "2,3,5", "--s", "0.25,0.5", "--theta", "0.4",
       "--output", "csv", "--jobs", "2"]
out = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
for row in csv.DictReader(io.StringIO(out)):
    print(f"N={row['N']} s={float(row['s']):.2f}  b={float(row['value']):.12f}  rel_diff={float(row['rel_diff']):.1e}")
