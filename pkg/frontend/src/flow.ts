/**
 * Session flow controller: create -> loop(next, choice) -> result.
 *
 * Pure state machine with an injected API client and a listener callback, so
 * the whole flow is testable without a DOM.  Choice submission is guarded:
 * while a POST is in flight the controller refuses further choices, so a
 * double-click can never produce two POSTs for one question.  No attitude
 * numbers exist in the state until the result phase; mid-session the only
 * numbers shown are the probe percentage and progress, straight from the API.
 */

import {
  ApiClient,
  ApiError,
  CreateSessionRequest,
  CreateSessionResponse,
  Question,
  ResultResponse,
} from "./api.js";
import { verifyCommitment } from "./verify.js";

export type Phase = "idle" | "loading" | "question" | "submitting" | "done" | "error";

export interface FlowState {
  phase: Phase;
  session?: CreateSessionResponse;
  question?: Question;
  answered: number;
  total: number;
  result?: ResultResponse;
  commitmentVerified?: boolean;
  error?: { code: string; message: string; retryable: boolean };
}

export type Listener = (state: FlowState) => void;

export class SessionFlow {
  state: FlowState = { phase: "idle", answered: 0, total: 0 };

  constructor(
    private readonly api: ApiClient,
    private readonly listener: Listener = () => {},
  ) {}

  private update(patch: Partial<FlowState>): void {
    this.state = { ...this.state, ...patch };
    this.listener(this.state);
  }

  private fail(error: unknown, retryable: boolean): void {
    if (error instanceof ApiError) {
      this.update({ phase: "error", error: { code: error.code, message: error.message, retryable } });
    } else {
      this.update({
        phase: "error",
        error: { code: "network_error", message: String(error), retryable },
      });
    }
  }

  async start(request: CreateSessionRequest = {}): Promise<void> {
    this.update({ phase: "loading" });
    try {
      const session = await this.api.createSession(request);
      this.update({ session, answered: 0, total: session.total_questions });
      await this.advance();
    } catch (error) {
      this.fail(error, true);
    }
  }

  /** Resume an existing session (page refresh lands on the same question). */
  async resume(session: CreateSessionResponse): Promise<void> {
    this.update({ phase: "loading", session, total: session.total_questions });
    await this.advance();
  }

  private async advance(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    try {
      const next = await this.api.next(session.session_id);
      if (next.done) {
        await this.finish();
        return;
      }
      this.update({
        phase: "question",
        question: next.question,
        answered: next.answered,
        total: next.total,
      });
    } catch (error) {
      this.fail(error, true);
    }
  }

  /**
   * Submit the answer to the currently displayed question.  Returns false if
   * no question is accepting answers (double-click, stale handler).
   */
  async choose(choseBet: boolean): Promise<boolean> {
    if (this.state.phase !== "question" || !this.state.session || !this.state.question) {
      return false;
    }
    const { session, question } = this.state;
    this.update({ phase: "submitting" });
    try {
      const progress = await this.api.postChoice(session.session_id, question.ordinal, choseBet);
      this.update({ answered: progress.answered });
      await this.advance();
      return true;
    } catch (error) {
      // a conflict means the answer is already recorded: refresh, not retry
      if (error instanceof ApiError && error.status === 409) {
        await this.advance();
        return false;
      }
      this.fail(error, true);
      return false;
    }
  }

  /** Retry affordance after a transient error. */
  async retry(): Promise<void> {
    if (this.state.session) {
      await this.advance();
    }
  }

  private async finish(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    try {
      const result = await this.api.result(session.session_id);
      const commitmentVerified = await verifyCommitment(
        session.commitment,
        result.seed,
        session.respondent,
        session.wave,
        session.depth,
      );
      this.update({ phase: "done", result, commitmentVerified });
    } catch (error) {
      this.fail(error, true);
    }
  }
}
