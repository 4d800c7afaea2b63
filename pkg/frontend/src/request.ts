import { existsSync, statSync } from "node:fs";
import { resolve } from "node:path";
import { pathToFileURL } from "node:url";
import { NavigationError } from "./errors.js";

const SCHEME = /^[a-zA-Z][a-zA-Z0-9+.-]+:\/\//;

/**
 * Turn the --in value into a navigable URL.
 *
 * Anything with a scheme is passed through untouched; everything else is
 * treated as a local path, which must exist and be a file.
 */
export function resolveInput(input: string): string {
  if (SCHEME.test(input)) {
    return input;
  }
  const abs = resolve(input);
  if (!existsSync(abs)) {
    throw new NavigationError(`input file not found: ${abs}`);
  }
  if (!statSync(abs).isFile()) {
    throw new NavigationError(`input is not a file: ${abs}`);
  }
  return pathToFileURL(abs).href;
}
