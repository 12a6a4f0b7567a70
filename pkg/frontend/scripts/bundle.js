#!/usr/bin/env node
/**
 * Wrap the compiled CommonJS viewer into a self-contained classic script.
 *
 * The compiled module only touches `exports`, so stubbing it with an empty
 * object makes the same file safe to inline into a <script> tag. With
 * --copy-to <path> the bundle is also written there (used to refresh the
 * asset embedded by the HTML weaver).
 */
const fs = require("fs");
const path = require("path");

const compiled = path.join(__dirname, "..", "dist", "src", "viewer.js");
const bundled = path.join(__dirname, "..", "dist", "viewer.js");

const code = fs.readFileSync(compiled, "utf8");
const wrapped =
  '"use strict";\n(function (exports) {\n' +
  code.replace(/^"use strict";\n/, "") +
  '})(typeof module !== "undefined" && module.exports ? module.exports : {});\n';

fs.writeFileSync(bundled, wrapped);

const copyFlag = process.argv.indexOf("--copy-to");
if (copyFlag !== -1 && process.argv[copyFlag + 1]) {
  const target = path.resolve(__dirname, "..", process.argv[copyFlag + 1]);
  fs.writeFileSync(target, wrapped);
  console.log(`bundle copied to ${target}`);
}
console.log(`bundle written to ${bundled}`);
