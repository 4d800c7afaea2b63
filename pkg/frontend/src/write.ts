import { promises as fs } from "node:fs";
import { basename, dirname, join } from "node:path";

/**
 * Write data to outPath through a temp file and rename, so a crash or error
 * mid-write never leaves a partial document at the destination.
 */
export async function writeAtomic(outPath: string, data: string): Promise<void> {
  const dir = dirname(outPath);
  await fs.mkdir(dir, { recursive: true });
  const tmp = join(
    dir,
    `.${basename(outPath)}.${process.pid}.${Date.now()}.tmp`,
  );
  try {
    await fs.writeFile(tmp, data);
    await fs.rename(tmp, outPath);
  } catch (err) {
    await fs.rm(tmp, { force: true });
    throw err;
  }
}
