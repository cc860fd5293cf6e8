/** Bad command-line arguments or settings. Exit code 1. */
export class UsageError extends Error {}

/** Unreadable or malformed input data. Exit code 2. */
export class DataError extends Error {}
