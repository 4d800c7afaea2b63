/** The page failed to load within the navigation budget. */
export class LoadTimeout extends Error {
  constructor(message: string) {
    super(message);
    this.name = "LoadTimeout";
  }
}

/** Navigation failed outright: bad URL, DNS failure, missing file. */
export class NavigationError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NavigationError";
  }
}

/** A sidecar document violated the format contract. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** No usable browser executable could be launched. */
export class BrowserUnavailable extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BrowserUnavailable";
  }
}

/** Bad command-line arguments. */
export class UsageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UsageError";
  }
}
