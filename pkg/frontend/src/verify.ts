/**
 * Client-side verification of the payout pre-commitment.
 *
 * At session start the service publishes a SHA-256 digest binding the hidden
 * session seed; at completion the seed is revealed and the client recomputes
 * the digest to confirm nothing was swapped mid-session.  The digest format
 * is part of the service contract:
 *
 *   elicitation-commitment:v1|seed=<seed>|respondent=<r>|wave=<w>|depth=<d>
 */

export async function commitmentDigest(
  seed: number,
  respondent: string,
  wave: string,
  depth: number,
): Promise<string> {
  const payload = `elicitation-commitment:v1|seed=${seed}|respondent=${respondent}|wave=${wave}|depth=${depth}`;
  const bytes = new TextEncoder().encode(payload);
  const hash = await crypto.subtle.digest("SHA-256", bytes);
  return Array.from(new Uint8Array(hash))
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

export async function verifyCommitment(
  expectedDigest: string,
  seed: number,
  respondent: string,
  wave: string,
  depth: number,
): Promise<boolean> {
  const digest = await commitmentDigest(seed, respondent, wave, depth);
  return digest === expectedDigest;
}
