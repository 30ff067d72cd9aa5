# pylint: disable-all
# flake8: noqa
from qareader.reader.coattention import CoattentionOutput, coattend, encode
from qareader.reader.functional import ShapeError, softmax_rows
from qareader.reader.lstm import BiLstmParams, LstmParams, bilstm_forward, lstm_forward
from qareader.reader.match import MatchOutput, match_attend
from qareader.reader.params import (
    EncoderParams,
    WeightsFormatError,
    init_params,
    load_params,
    save_params,
)
from qareader.reader.pipeline import Prediction, Reader
from qareader.reader.pointer import SpanPrediction, best_span, point_answer
