r:=rand(); if r=1 {y:='a:=a+1;';}; if r=2 {y:='b:=b+1;';}; a:=0; b:=0; reflect(y);$
