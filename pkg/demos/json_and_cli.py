"""
Exporting a problem and solving it from the command line
========================================================

Any catalog fixture can be written as JSON, edited, and fed back to
`mcmconn conn solve`.  Coefficients are exact strings such as "1/3" or
"3-2i/6".
"""
import io
import json
import os
import tempfile

from mcmconn import serial
from mcmconn.catalog import cusp_fixture
from mcmconn.cli import run

g, m = cusp_fixture()
text = serial.dumps(serial.connection_problem_to_json(m, g))
print(text[:300], "...")

path = os.path.join(tempfile.mkdtemp(), "cusp.json")
with open(path, "w") as fh:
    fh.write(text)

out = io.StringIO()
code = run(["conn", "solve", path, "--integrability"], out, io.StringIO())
print("exit", code, json.loads(out.getvalue())["verdict"])

# a broken weight is reported with its field path and exit code 2
data = json.loads(text)
data["presentation"]["ring"]["weights"][0] = -1
with open(path, "w") as fh:
    fh.write(serial.dumps(data))
err = io.StringIO()
print("exit", run(["conn", "solve", path], io.StringIO(), err), err.getvalue().strip())
